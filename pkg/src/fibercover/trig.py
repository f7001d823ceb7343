"""Exact trigonometric-polynomial calculus on the 4-torus.

Scalars are finite sums of c * pi^m * cos(pi <k, u>) and s * pi^m *
sin(pi <k, u>), where u = (x, y, z, theta), k runs over integer vectors
(so the underlying frequencies live in the half-integer lattice once the
circles are taken as R/Z), and the coefficients c, s are exact rationals.
The pi power is tracked symbolically because differentiation introduces pi
factors that must cancel exactly in identities such as Jacobi's.

Products stay inside the lattice by the product-to-sum identities, and a
scalar is zero iff every normalized term coefficient is zero, which makes
the zero test exact (powers of pi are linearly independent over Q).

Frequency keys are normalized so the first nonzero entry is positive
(cosine is even, sine is odd), and the zero frequency keeps only its
cosine part.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import mpmath
import numpy as np

Rational = Union[int, Fraction]

_ZERO4 = (0, 0, 0, 0)
AXES = ("x", "y", "z", "theta")


def _normalize_key(k2: Sequence[int]) -> tuple[tuple[int, int, int, int], int]:
    """Canonical frequency key and the sign flip applied to reach it."""
    k2 = tuple(int(v) for v in k2)
    if len(k2) != 4:
        raise ValueError("frequency must be a quadruple of doubled integers")
    for v in k2:
        if v > 0:
            return k2, 1
        if v < 0:
            return tuple(-w for w in k2), -1
    return _ZERO4, 1


class TrigScalar:
    """Immutable exact trigonometric polynomial on the 4-torus."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[dict] = None):
        # terms: {(k2, m): [ccos, csin]}; assumed already normalized
        object.__setattr__(self, "_terms", terms or {})

    def __setattr__(self, key, value):
        raise AttributeError("TrigScalar is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls) -> "TrigScalar":
        return cls()

    @classmethod
    def constant(cls, value: Rational, pi_power: int = 0) -> "TrigScalar":
        value = Fraction(value)
        if value == 0:
            return cls()
        return cls({(_ZERO4, pi_power): [value, Fraction(0)]})

    @classmethod
    def cos_term(cls, k2: Sequence[int], coeff: Rational = 1, pi_power: int = 0) -> "TrigScalar":
        builder = _TermBuilder()
        builder.add(k2, pi_power, Fraction(coeff), Fraction(0))
        return builder.build()

    @classmethod
    def sin_term(cls, k2: Sequence[int], coeff: Rational = 1, pi_power: int = 0) -> "TrigScalar":
        builder = _TermBuilder()
        builder.add(k2, pi_power, Fraction(0), Fraction(coeff))
        return builder.build()

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterator[tuple[tuple[int, int, int, int], int, str, Fraction]]:
        """Yield (k2, pi_power, kind, coefficient) for every stored part."""
        for (k2, m), (ccos, csin) in sorted(self._terms.items()):
            if ccos:
                yield k2, m, "cos", ccos
            if csin:
                yield k2, m, "sin", csin

    def constant_value(self) -> Optional[dict[int, Fraction]]:
        """Coefficients by pi power when the scalar is constant, else None."""
        out: dict[int, Fraction] = {}
        for (k2, m), (ccos, csin) in self._terms.items():
            if k2 != _ZERO4:
                if ccos or csin:
                    return None
                continue
            if ccos:
                out[m] = ccos
        return out

    def depends_on(self, axis: int) -> bool:
        return any(k2[axis] != 0 for (k2, _m), (c, s) in self._terms.items() if c or s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigScalar):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        return hash(tuple(self.terms()))

    def __repr__(self) -> str:
        parts = []
        for k2, m, kind, coeff in self.terms():
            pi_part = "" if m == 0 else ("*pi" if m == 1 else f"*pi^{m}")
            if k2 == _ZERO4:
                parts.append(f"{coeff}{pi_part}")
                continue
            arg = "+".join(f"{v}*{a}" for v, a in zip(k2, AXES) if v)
            parts.append(f"{coeff}{pi_part}*{kind}(pi*({arg}))")
        return " + ".join(parts) if parts else "0"

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "TrigScalar") -> "TrigScalar":
        if not isinstance(other, TrigScalar):
            return NotImplemented
        builder = _TermBuilder(self._terms)
        for (k2, m), (ccos, csin) in other._terms.items():
            builder.add_normalized(k2, m, ccos, csin)
        return builder.build()

    def __neg__(self) -> "TrigScalar":
        return TrigScalar({key: [-c, -s] for key, (c, s) in self._terms.items()})

    def __sub__(self, other: "TrigScalar") -> "TrigScalar":
        return self + (-other)

    def __mul__(self, other: Union["TrigScalar", Rational]) -> "TrigScalar":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return TrigScalar()
            q = Fraction(other)
            return TrigScalar({key: [c * q, s * q] for key, (c, s) in self._terms.items()})
        if not isinstance(other, TrigScalar):
            return NotImplemented
        builder = _TermBuilder()
        half = Fraction(1, 2)
        for (ka, ma), (ca, sa) in self._terms.items():
            for (kb, mb), (cb, sb) in other._terms.items():
                m = ma + mb
                ksum = tuple(p + q for p, q in zip(ka, kb))
                kdiff = tuple(p - q for p, q in zip(ka, kb))
                # cos a cos b = (cos(a-b) + cos(a+b)) / 2
                if ca and cb:
                    w = ca * cb * half
                    builder.add(kdiff, m, w, Fraction(0))
                    builder.add(ksum, m, w, Fraction(0))
                # sin a sin b = (cos(a-b) - cos(a+b)) / 2
                if sa and sb:
                    w = sa * sb * half
                    builder.add(kdiff, m, w, Fraction(0))
                    builder.add(ksum, m, -w, Fraction(0))
                # cos a sin b = (sin(a+b) - sin(a-b)) / 2
                if ca and sb:
                    w = ca * sb * half
                    builder.add(ksum, m, Fraction(0), w)
                    builder.add(kdiff, m, Fraction(0), -w)
                # sin a cos b = (sin(a+b) + sin(a-b)) / 2
                if sa and cb:
                    w = sa * cb * half
                    builder.add(ksum, m, Fraction(0), w)
                    builder.add(kdiff, m, Fraction(0), w)
        return builder.build()

    __rmul__ = __mul__

    def times_pi(self, power: int = 1) -> "TrigScalar":
        return TrigScalar({(k2, m + power): [c, s] for (k2, m), (c, s) in self._terms.items()})

    def partial(self, axis: int) -> "TrigScalar":
        """Exact partial derivative along coordinate axis (0..3)."""
        builder = _TermBuilder()
        for (k2, m), (ccos, csin) in self._terms.items():
            f = k2[axis]
            if f == 0:
                continue
            # d/du cos(pi<k2,u>) = -pi k2_axis sin(...), and dually for sin
            builder.add_normalized(k2, m + 1, csin * f, -ccos * f)
        return builder.build()

    # -- evaluation ----------------------------------------------------------

    def eval_float(self, point: Sequence[float]) -> float:
        x = tuple(float(v) for v in point)
        total = 0.0
        for (k2, m), (ccos, csin) in self._terms.items():
            phase = np.pi * sum(f * v for f, v in zip(k2, x))
            scale = np.pi**m
            total += scale * (float(ccos) * np.cos(phase) + float(csin) * np.sin(phase))
        return float(total)

    def eval_grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate on the product grid of four coordinate arrays."""
        shape = [np.asarray(a, dtype=float).reshape([-1 if i == j else 1 for j in range(4)])
                 for i, a in enumerate(axes)]
        total = np.zeros([len(a) for a in axes])
        for (k2, m), (ccos, csin) in self._terms.items():
            phase = np.zeros_like(total)
            for f, coord in zip(k2, shape):
                if f:
                    phase = phase + f * coord
            phase = np.pi * phase
            scale = np.pi**m
            if ccos:
                total = total + (scale * float(ccos)) * np.cos(phase)
            if csin:
                total = total + (scale * float(csin)) * np.sin(phase)
        return total

    def evaluate(self, point: Sequence[Rational], dps: int = 50) -> mpmath.mpf:
        """High-precision value at a point with rational coordinates."""
        with mpmath.workdps(dps):
            total = mpmath.mpf(0)
            for (k2, m), (ccos, csin) in self._terms.items():
                phase = mpmath.pi * sum(
                    mpmath.mpf(f) * mpmath.mpf(v.numerator) / mpmath.mpf(v.denominator)
                    for f, v in zip(k2, (Fraction(p) for p in point))
                )
                scale = mpmath.pi**m
                if ccos:
                    total += scale * mpmath.mpf(ccos.numerator) / ccos.denominator * mpmath.cos(phase)
                if csin:
                    total += scale * mpmath.mpf(csin.numerator) / csin.denominator * mpmath.sin(phase)
            return +total

    # -- serialization ---------------------------------------------------------

    def to_json_terms(self, component: Optional[int] = None) -> list[dict]:
        out = []
        for k2, m, kind, coeff in self.terms():
            entry = {
                "k2": list(k2),
                "coeff": str(coeff),
                "pi": m,
                "kind": kind,
            }
            if component is not None:
                entry["component"] = component
            out.append(entry)
        return out

    @classmethod
    def from_json_terms(cls, entries: Iterable[dict]) -> "TrigScalar":
        builder = _TermBuilder()
        for entry in entries:
            coeff = Fraction(entry["coeff"])
            if entry["kind"] == "cos":
                builder.add(entry["k2"], int(entry["pi"]), coeff, Fraction(0))
            elif entry["kind"] == "sin":
                builder.add(entry["k2"], int(entry["pi"]), Fraction(0), coeff)
            else:
                raise ValueError(f"unknown term kind {entry['kind']!r}")
        return builder.build()


class _TermBuilder:
    """Accumulates normalized terms and drops exact zeros."""

    def __init__(self, initial: Optional[dict] = None):
        self.terms = {key: [c, s] for key, (c, s) in (initial or {}).items()}

    def add(self, k2: Sequence[int], m: int, ccos: Fraction, csin: Fraction):
        key, sign = _normalize_key(k2)
        self.add_normalized(key, m, ccos, sign * csin)

    def add_normalized(self, k2: tuple, m: int, ccos: Fraction, csin: Fraction):
        if k2 == _ZERO4:
            csin = Fraction(0)
        if not (ccos or csin):
            return
        slot = self.terms.setdefault((k2, m), [Fraction(0), Fraction(0)])
        slot[0] += ccos
        slot[1] += csin

    def build(self) -> TrigScalar:
        cleaned = {key: [c, s] for key, (c, s) in self.terms.items() if c or s}
        return TrigScalar(cleaned)


class TrigVectorField:
    """Vector field on the 4-torus with TrigScalar components."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[TrigScalar]):
        components = tuple(components)
        if len(components) != 4:
            raise ValueError("a vector field needs 4 components")
        object.__setattr__(self, "components", components)

    def __setattr__(self, key, value):
        raise AttributeError("TrigVectorField is immutable")

    @classmethod
    def zero(cls) -> "TrigVectorField":
        return cls([TrigScalar.zero()] * 4)

    @classmethod
    def coordinate(cls, axis: int) -> "TrigVectorField":
        comps = [TrigScalar.zero()] * 4
        comps[axis] = TrigScalar.constant(1)
        return cls(comps)

    def __getitem__(self, i: int) -> TrigScalar:
        return self.components[i]

    def __add__(self, other: "TrigVectorField") -> "TrigVectorField":
        return TrigVectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "TrigVectorField") -> "TrigVectorField":
        return TrigVectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "TrigVectorField":
        return TrigVectorField([-a for a in self.components])

    def __mul__(self, scalar: Union[TrigScalar, Rational]) -> "TrigVectorField":
        return TrigVectorField([c * scalar for c in self.components])

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigVectorField):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        return hash(self.components)

    def eval_float(self, point: Sequence[float]) -> tuple[float, float, float, float]:
        return tuple(c.eval_float(point) for c in self.components)

    def eval_grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Array of shape grid + (4,)."""
        return np.stack([c.eval_grid(axes) for c in self.components], axis=-1)

    def __repr__(self) -> str:
        names = ("dx", "dy", "dz", "dtheta")
        parts = [f"({c!r}) {n}" for c, n in zip(self.components, names) if not c.is_zero]
        return " + ".join(parts) if parts else "0"


def lie_bracket(X: TrigVectorField, Y: TrigVectorField) -> TrigVectorField:
    """Exact Lie bracket [X, Y]^j = sum_i X^i d_i Y^j - Y^i d_i X^j."""
    comps = []
    for j in range(4):
        total = TrigScalar.zero()
        for i in range(4):
            if not X[i].is_zero:
                total = total + X[i] * Y[j].partial(i)
            if not Y[i].is_zero:
                total = total - Y[i] * X[j].partial(i)
        comps.append(total)
    return TrigVectorField(comps)


class TrigForm:
    """Differential form on the 4-torus with TrigScalar coefficients."""

    __slots__ = ("degree", "components")

    def __init__(self, degree: int, components: Optional[dict] = None):
        if not 0 <= degree <= 4:
            raise ValueError("degree must be between 0 and 4")
        comps = {}
        for idx, scalar in (components or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"component index {idx} is not strictly increasing of length {degree}")
            if not scalar.is_zero:
                comps[idx] = scalar
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, key, value):
        raise AttributeError("TrigForm is immutable")

    @classmethod
    def one_form(cls, dx=None, dy=None, dz=None, dtheta=None) -> "TrigForm":
        comps = {}
        for axis, scalar in enumerate((dx, dy, dz, dtheta)):
            if scalar is not None and not scalar.is_zero:
                comps[(axis,)] = scalar
        return cls(1, comps)

    def component(self, idx: Sequence[int]) -> TrigScalar:
        return self.components.get(tuple(idx), TrigScalar.zero())

    @property
    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "TrigForm") -> "TrigForm":
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.components)
        for idx, scalar in other.components.items():
            out[idx] = out.get(idx, TrigScalar.zero()) + scalar
        return TrigForm(self.degree, out)

    def __neg__(self) -> "TrigForm":
        return TrigForm(self.degree, {idx: -s for idx, s in self.components.items()})

    def __sub__(self, other: "TrigForm") -> "TrigForm":
        return self + (-other)

    def d(self) -> "TrigForm":
        """Exterior derivative."""
        if self.degree == 4:
            return TrigForm(4)
        out: dict[tuple, TrigScalar] = {}
        for idx, scalar in self.components.items():
            for axis in range(4):
                if axis in idx:
                    continue
                merged, sign = _insert_index(axis, idx)
                term = scalar.partial(axis) * sign
                out[merged] = out.get(merged, TrigScalar.zero()) + term
        return TrigForm(self.degree + 1, out)

    def wedge(self, other: "TrigForm") -> "TrigForm":
        deg = self.degree + other.degree
        if deg > 4:
            raise ValueError("wedge product exceeds the top degree")
        out: dict[tuple, TrigScalar] = {}
        for ia, sa in self.components.items():
            for ib, sb in other.components.items():
                merged = _merge_indices(ia, ib)
                if merged is None:
                    continue
                idx, sign = merged
                term = (sa * sb) * sign
                out[idx] = out.get(idx, TrigScalar.zero()) + term
        return TrigForm(deg, out)

    def pair_with(self, field: TrigVectorField) -> TrigScalar:
        """Pairing of a 1-form with a vector field."""
        if self.degree != 1:
            raise ValueError("pairing is defined for 1-forms")
        total = TrigScalar.zero()
        for (axis,), scalar in self.components.items():
            total = total + scalar * field[axis]
        return total


def _insert_index(axis: int, idx: tuple) -> tuple[tuple, int]:
    pos = sum(1 for v in idx if v < axis)
    merged = tuple(sorted(idx + (axis,)))
    return merged, (-1) ** pos


def _merge_indices(ia: tuple, ib: tuple) -> Optional[tuple[tuple, int]]:
    if set(ia) & set(ib):
        return None
    combined = list(ia) + list(ib)
    # count inversions of the concatenation to get the shuffle sign
    inversions = sum(
        1 for p in range(len(combined)) for q in range(p + 1, len(combined)) if combined[p] > combined[q]
    )
    return tuple(sorted(combined)), (-1) ** inversions
