"""Engel structures on the 4-torus: frames, rank certificates, and
development data.

The family under study is spanned by the fiber direction d_theta and

    W = cos(pi(n theta + <alpha, p>)) d_z + sin(pi(n theta + <alpha, p>)) V_p,

where V_p = cos(2 pi z) d_x + sin(2 pi z) d_y rotates with the base point.
Rank conditions (2, 3, 4 for the iterated bracket flag) are certified by
singular values on a product grid with an explicit margin; the stage-1
Gram determinant is also available symbolically.  Twisting and the
classifying triple are read off as certified half-turn counts of the
projected line in the (d_z, V_p) plane, with conventions fixed once and
for all: basepoint 0, lifts at constant theta = 0, standard generator
loops, and the (d_z, V_p) orientation.  A different convention would shift
the triple by a fixed automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import hypot
from typing import Optional, Sequence, Union

import numpy as np

from .trig import TrigForm, TrigScalar, TrigVectorField, lie_bracket
from .winding import projective_half_turns


class PreconditionError(ValueError):
    """An operation was called on data violating its stated preconditions."""


def v_p_field() -> TrigVectorField:
    """The rotating horizontal field cos(2 pi z) d_x + sin(2 pi z) d_y."""
    return TrigVectorField(
        [
            TrigScalar.cos_term((0, 0, 2, 0)),
            TrigScalar.sin_term((0, 0, 2, 0)),
            TrigScalar.zero(),
            TrigScalar.zero(),
        ]
    )


def standard_contact_form() -> TrigForm:
    """sin(2 pi z) dx + cos(2 pi z) dy, a contact form on the 3-torus."""
    return TrigForm.one_form(
        dx=TrigScalar.sin_term((0, 0, 2, 0)),
        dy=TrigScalar.cos_term((0, 0, 2, 0)),
    )


def standard_contact_frame() -> tuple[TrigForm, tuple[TrigVectorField, TrigVectorField]]:
    """The standard contact form together with a frame of its kernel.

    The frame is (d_z, cos(2 pi z) d_x - sin(2 pi z) d_y); the second leg
    differs from v_p_field by the sign of its d_y part, which is what
    annihilation of the form forces.
    """
    kernel_leg = TrigVectorField(
        [
            TrigScalar.cos_term((0, 0, 2, 0)),
            TrigScalar.sin_term((0, 0, 2, 0), -1),
            TrigScalar.zero(),
            TrigScalar.zero(),
        ]
    )
    return standard_contact_form(), (TrigVectorField.coordinate(2), kernel_leg)


@dataclass(frozen=True)
class ContactReport:
    """Result of the nowhere-zero test on the volume coefficient."""

    is_contact: bool
    coefficient: TrigScalar
    constant: Optional[dict]
    grid_min_abs: Optional[float]

    def to_json(self) -> dict:
        out = {"is_contact": self.is_contact}
        if self.constant is not None:
            out["constant"] = {str(m): str(c) for m, c in self.constant.items()}
        if self.grid_min_abs is not None:
            out["grid_min_abs"] = self.grid_min_abs
        return out


def contact_check(form: TrigForm, grid_per_axis: int = 16, tolerance: float = 1e-9) -> ContactReport:
    """Decide whether a theta-independent 1-form on the 3-torus is contact.

    Computes form ^ d(form) symbolically as a multiple of dx dy dz.  A
    constant coefficient gives an exact verdict; otherwise the grid must
    certify a uniform sign with margin `tolerance`.
    """
    if form.degree != 1:
        raise ValueError("contact_check expects a 1-form")
    if not form.component((3,)).is_zero or any(
        s.depends_on(3) for s in form.components.values()
    ):
        raise ValueError("the form must be theta-independent with no dtheta part")
    vol = form.wedge(form.d())
    for idx, scalar in vol.components.items():
        if 3 in idx and not scalar.is_zero:
            raise AssertionError("theta-independent input produced a theta component")
    coeff = vol.component((0, 1, 2))
    constant = coeff.constant_value()
    if constant is not None:
        is_contact = bool(constant)
        return ContactReport(is_contact, coeff, constant, None)
    axes = [np.arange(grid_per_axis) / grid_per_axis] * 3 + [np.zeros(1)]
    values = coeff.eval_grid(axes).ravel()
    min_abs = float(np.min(np.abs(values)))
    same_sign = bool(np.all(values > 0) or np.all(values < 0))
    return ContactReport(same_sign and min_abs >= tolerance, coeff, None, min_abs)


@dataclass(frozen=True)
class Distribution:
    """Plane field given by spanning vector fields and a declared rank."""

    fields: tuple[TrigVectorField, ...]
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(self.fields))
        if self.rank < 1 or self.rank > 4:
            raise ValueError("rank must be between 1 and 4")

    def to_json(self) -> dict:
        out = []
        for f in self.fields:
            terms = []
            for comp, scalar in enumerate(f.components):
                terms.extend(scalar.to_json_terms(component=comp))
            out.append(terms)
        return {"rank": self.rank, "fields": out}

    @classmethod
    def from_json(cls, doc: dict) -> "Distribution":
        fields = []
        for terms in doc["fields"]:
            per_comp: dict[int, list] = {0: [], 1: [], 2: [], 3: []}
            for term in terms:
                per_comp[int(term["component"])].append(term)
            fields.append(
                TrigVectorField([TrigScalar.from_json_terms(per_comp[i]) for i in range(4)])
            )
        return cls(fields=tuple(fields), rank=int(doc["rank"]))


def prolonged_engel_frame(n: int, alpha: Sequence[int] = (0, 0, 0)) -> Distribution:
    """Rank-2 distribution span(d_theta, W) with fiberwise twisting n.

    n = 1 with alpha = 0 is the base structure; n >= 2 with a triple alpha
    (reduced mod n) is its pullback under the corresponding fiberwise
    n-fold covering.
    """
    if n < 1:
        raise ValueError("twisting must be >= 1")
    alpha = tuple(int(a) % n for a in alpha)
    if len(alpha) != 3:
        raise ValueError("alpha must be an integer triple")
    k2 = (alpha[0], alpha[1], alpha[2], n)
    w = TrigScalar.cos_term(k2) * TrigVectorField.coordinate(2) + TrigScalar.sin_term(k2) * v_p_field()
    return Distribution(fields=(TrigVectorField.coordinate(3), w), rank=2)


def gram_determinant(dist: Distribution) -> TrigScalar:
    """Symbolic Gram determinant of the spanning fields (stage-1 certificate).

    Nowhere zero iff the declared spanning fields are pointwise independent.
    """
    k = len(dist.fields)
    gram = [[TrigScalar.zero()] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            total = TrigScalar.zero()
            for c in range(4):
                total = total + dist.fields[i][c] * dist.fields[j][c]
            gram[i][j] = total
    if k == 1:
        return gram[0][0]
    if k == 2:
        return gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0]
    raise ValueError("symbolic Gram determinant is provided for up to 2 spanning fields")


def _grid_axes(grid_per_axis: int) -> list[np.ndarray]:
    return [np.arange(grid_per_axis) / grid_per_axis] * 4


def _stack_columns(fields: Sequence[TrigVectorField], axes) -> np.ndarray:
    """(samples, 4, len(fields)) array of the fields over the grid."""
    cols = [f.eval_grid(axes).reshape(-1, 4) for f in fields]
    return np.stack(cols, axis=-1)


def _min_singular_value(mats: np.ndarray, rank: int) -> tuple[float, int]:
    svals = np.linalg.svd(mats, compute_uv=False)
    sigma = svals[:, rank - 1]
    idx = int(np.argmin(sigma))
    return float(sigma[idx]), idx


def _sample_point(idx: int, grid_per_axis: int) -> tuple[float, float, float, float]:
    coords = np.unravel_index(idx, (grid_per_axis,) * 4)
    return tuple(float(c) / grid_per_axis for c in coords)


@dataclass(frozen=True)
class EngelStage:
    name: str
    required_rank: int
    min_singular_value: float
    worst_point: tuple[float, float, float, float]
    passed: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "required_rank": self.required_rank,
            "min_singular_value": self.min_singular_value,
            "worst_point": list(self.worst_point),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class EngelReport:
    grid_per_axis: int
    tolerance: float
    stages: tuple[EngelStage, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stages)

    @property
    def failure(self) -> Optional[str]:
        for s in self.stages:
            if not s.passed:
                return s.name
        return None

    def to_json(self) -> dict:
        return {
            "grid_per_axis": self.grid_per_axis,
            "tolerance": self.tolerance,
            "stages": [s.to_json() for s in self.stages],
            "passed": self.passed,
            "failure": self.failure,
        }


def engel_check(dist: Distribution, grid_per_axis: int = 16, tolerance: float = 1e-6) -> EngelReport:
    """Certify the rank flag (2, 3, 4) of a rank-2 distribution on a grid.

    Stage 1 checks the declared spanning rank itself (its failure means the
    input was not a plane field, a distinct defect from non-maximality);
    stage 2 adds the bracket of the spanners; stage 3 adds all brackets of
    the stage-2 spanners.  Each stage passes when the relevant singular
    value stays at or above `tolerance` on the whole grid.
    """
    if len(dist.fields) != 2 or dist.rank != 2:
        raise ValueError("engel_check expects a distribution with 2 spanning fields")
    x1, x2 = dist.fields
    x12 = lie_bracket(x1, x2)
    second = [lie_bracket(x1, x12), lie_bracket(x2, x12)]
    axes = _grid_axes(grid_per_axis)

    stage_specs = [
        ("declared-span", 2, [x1, x2]),
        ("first-brackets", 3, [x1, x2, x12]),
        ("second-brackets", 4, [x1, x2, x12] + second),
    ]
    stages = []
    for name, rank, fields in stage_specs:
        mats = _stack_columns(fields, axes)
        sigma, idx = _min_singular_value(mats, rank)
        stages.append(
            EngelStage(
                name=name,
                required_rank=rank,
                min_singular_value=sigma,
                worst_point=_sample_point(idx, grid_per_axis),
                passed=sigma >= tolerance,
            )
        )
    return EngelReport(grid_per_axis=grid_per_axis, tolerance=tolerance, stages=tuple(stages))


def characteristic_line_check(
    dist: Distribution,
    line: TrigVectorField,
    grid_per_axis: int = 16,
    tolerance: float = 1e-6,
) -> bool:
    """Whether bracketing the line into the derived plane field stays inside.

    Preconditions (violations raise PreconditionError rather than returning
    False): the line must lie in the distribution pointwise and the
    distribution must pass engel_check.
    """
    if len(dist.fields) != 2:
        raise ValueError("expected a rank-2 distribution")
    x1, x2 = dist.fields
    axes = _grid_axes(grid_per_axis)

    inside = _stack_columns([x1, x2, line], axes)
    sigma3 = np.linalg.svd(inside, compute_uv=False)[:, 2]
    if float(np.max(sigma3)) >= tolerance:
        raise PreconditionError("the line field does not lie inside the distribution")

    report = engel_check(dist, grid_per_axis=grid_per_axis, tolerance=tolerance)
    if not report.passed:
        raise PreconditionError(f"distribution fails engel_check at stage {report.failure}")

    x12 = lie_bracket(x1, x2)
    derived = [x1, x2, x12]
    for spanner in derived:
        extended = derived + [lie_bracket(line, spanner)]
        mats = _stack_columns(extended, axes)
        sigma4 = np.linalg.svd(mats, compute_uv=False)[:, 3]
        if float(np.max(sigma4)) >= tolerance:
            return False
    return True


def _project_to_contact_plane(
    field: TrigVectorField, point: tuple[float, float, float, float]
) -> tuple[float, float]:
    """Components of the projected field in the (d_z, V_p) frame at a point."""
    vx, vy, vz, _ = field.eval_float(point)
    c = np.cos(2 * np.pi * point[2])
    s = np.sin(2 * np.pi * point[2])
    return vz, vx * c + vy * s


def _pick_transverse_spanner(
    dist: Distribution,
    path,
    samples: int = 16,
    degeneracy_tol: float = 1e-9,
) -> TrigVectorField:
    """Spanner with the largest worst-case projected norm along the path."""
    best = None
    best_norm = -1.0
    for f in dist.fields:
        worst = min(
            hypot(*_project_to_contact_plane(f, path(i / samples))) for i in range(samples)
        )
        if worst > best_norm:
            best_norm = worst
            best = f
    if best_norm < degeneracy_tol:
        raise PreconditionError("every spanner projects degenerately along the loop")
    return best


def _half_turns_along(
    dist: Distribution, path, samples: int, max_samples: int
) -> int:
    spanner = _pick_transverse_spanner(dist, path)

    def line(s: float) -> tuple[float, float]:
        return _project_to_contact_plane(spanner, path(s))

    return projective_half_turns(line, samples=samples, max_samples=max_samples)


def twisting_number(
    dist: Distribution,
    basepoint: Sequence[float] = (0.0, 0.0, 0.0),
    samples: int = 64,
    max_samples: int = 4096,
    verify: bool = True,
    verify_grid: int = 8,
    tolerance: float = 1e-6,
) -> int:
    """Half-turns of the projected plane field along one fiber circle.

    Requires the fiber direction to be the characteristic line of the
    distribution (checked on a grid unless verify=False).  The count is
    positive for fiber-orientation-preserving structures; anything else is
    rejected.
    """
    if verify:
        if not characteristic_line_check(
            dist, TrigVectorField.coordinate(3), grid_per_axis=verify_grid, tolerance=tolerance
        ):
            raise PreconditionError("the fiber direction is not the characteristic line")
    bx, by, bz = (float(v) for v in basepoint)

    def path(s: float):
        return (bx, by, bz, s)

    n = _half_turns_along(dist, path, samples, max_samples)
    if n < 1:
        raise ValueError(f"fiberwise half-turn count is {n}; expected a positive twisting")
    return n


def development_alpha(
    dist: Distribution,
    n: int,
    samples: int = 64,
    max_samples: int = 4096,
    verify: bool = True,
    verify_grid: int = 8,
    tolerance: float = 1e-6,
) -> tuple[int, int, int]:
    """Classifying triple mod n of a twisted structure, from base loops.

    Counts half-turns of the projected line along each standard generator
    loop at theta = 0, basepoint 0.  Requires the twisting number to be n.
    """
    if verify:
        measured = twisting_number(
            dist, samples=samples, max_samples=max_samples,
            verify=True, verify_grid=verify_grid, tolerance=tolerance,
        )
        if measured != n:
            raise PreconditionError(f"twisting number is {measured}, not {n}")
    result = []
    for axis in range(3):
        def path(s: float, axis=axis):
            coords = [0.0, 0.0, 0.0, 0.0]
            coords[axis] = s
            return tuple(coords)

        result.append(_half_turns_along(dist, path, samples, max_samples) % n)
    return tuple(result)
