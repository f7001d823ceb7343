"""Finitely generated abelian groups and fundamental-group presentations.

Groups are kept in canonical form: free rank plus invariant factors
d1 | d2 | ... (each >= 2).  Element coordinates list the torsion
coordinates first (reduced into [0, di)) and the free coordinates last,
matching the invariant-factor list written with trailing zeros for free
summands.

A presentation's abelianization is the cokernel of its relator
exponent-sum matrix; the Smith transform is stored so that words can be
projected to canonical coordinates and canonical generators can be lifted
back to words.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iter_product
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .exact_linalg import IntMatrix, smith_normal_form


class FGAbelianGroup:
    """Canonical form of a finitely generated abelian group."""

    __slots__ = ("rank", "torsion", "name", "basis_change", "generator_lifts")

    def __init__(
        self,
        rank: int,
        torsion: Sequence[int] = (),
        *,
        name: str = "",
        basis_change: Optional[IntMatrix] = None,
        generator_lifts: Optional[IntMatrix] = None,
    ):
        torsion = tuple(int(d) for d in torsion)
        if rank < 0:
            raise ValueError("rank must be >= 0")
        if any(d < 2 for d in torsion):
            raise ValueError("invariant factors must be >= 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors must form a divisibility chain, got {torsion}")
        n = len(torsion) + rank
        if basis_change is None:
            basis_change = IntMatrix.identity(n)
        if generator_lifts is None:
            generator_lifts = IntMatrix.identity(n)
        if basis_change.rows != n:
            raise ValueError("basis_change must have one row per canonical generator")
        if generator_lifts.cols != n:
            raise ValueError("generator_lifts must have one column per canonical generator")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "torsion", torsion)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "basis_change", basis_change)
        object.__setattr__(self, "generator_lifts", generator_lifts)

    def __setattr__(self, key, value):
        raise AttributeError("FGAbelianGroup is immutable")

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors with trailing zeros for free summands."""
        return self.torsion + (0,) * self.rank

    def order(self) -> Optional[int]:
        if self.rank > 0:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def same_structure(self, other: "FGAbelianGroup") -> bool:
        return self.rank == other.rank and self.torsion == other.torsion

    def __eq__(self, other) -> bool:
        return isinstance(other, FGAbelianGroup) and self.same_structure(other)

    def __hash__(self) -> int:
        return hash((self.rank, self.torsion))

    def __repr__(self) -> str:
        parts = [f"Z_{d}" for d in self.torsion]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        desc = " x ".join(parts) if parts else "0"
        return f"<{self.name or 'group'}: {desc}>"

    def _reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        k = len(self.torsion)
        tors = tuple(int(c) % d for c, d in zip(coords[:k], self.torsion))
        free = tuple(int(c) for c in coords[k:])
        return tors + free

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self._reduce(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.ngens)

    def elements(self) -> Iterable["GroupElement"]:
        if self.rank > 0:
            raise ValueError(f"{self!r} is infinite")
        for coords in iter_product(*(range(d) for d in self.torsion)):
            yield GroupElement(self, coords)

    def project(self, exponents: Sequence[int]) -> "GroupElement":
        """Canonical coordinates of a presentation-exponent vector."""
        return self.element(self.basis_change.apply(exponents))

    def lift_generator(self, j: int) -> tuple[int, ...]:
        """Presentation-exponent vector representing canonical generator j."""
        return self.generator_lifts.column(j)


@dataclass(frozen=True)
class GroupElement:
    group: FGAbelianGroup
    coords: tuple[int, ...]

    def _check_companion(self, other: "GroupElement"):
        if not self.group.same_structure(other.group):
            raise ValueError(f"elements of different groups: {self.group!r} vs {other.group!r}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check_companion(other)
        return self.group.element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check_companion(other)
        return self.group.element(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return self.group.element(tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> "GroupElement":
        return self.group.element(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"{list(self.coords)} in {self.group!r}"


@dataclass(frozen=True)
class GroupPresentation:
    """Generators and relators; relator words are signed 1-based indices."""

    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]
    name: str = ""
    central: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(int(s) for s in w) for w in self.relators))
        g = len(self.generators)
        for word in self.relators:
            for s in word:
                if s == 0 or abs(s) > g:
                    raise ValueError(f"relator letter {s} out of range for {g} generators")
        if self.central is not None and self.central not in self.generators:
            raise ValueError(f"central generator {self.central!r} is not a generator")

    def word_exponents(self, word: Sequence[int]) -> tuple[int, ...]:
        exps = [0] * len(self.generators)
        for s in word:
            exps[abs(s) - 1] += 1 if s > 0 else -1
        return tuple(exps)

    def exponent_matrix(self) -> IntMatrix:
        """Generators x relators matrix of exponent sums."""
        cols = [self.word_exponents(w) for w in self.relators]
        g = len(self.generators)
        data = [[col[i] for col in cols] for i in range(g)]
        return IntMatrix(data, shape=(g, len(self.relators)))


def abelianization(p: GroupPresentation) -> FGAbelianGroup:
    """Cokernel of the relator exponent matrix, via Smith normal form."""
    g = len(p.generators)
    name = f"ab({p.name})" if p.name else ""
    if g == 0:
        return FGAbelianGroup(0, name=name)
    if not p.relators:
        return FGAbelianGroup(g, name=name)
    snf = smith_normal_form(p.exponent_matrix())
    diag = snf.diagonal
    torsion_rows = [i for i, d in enumerate(diag) if d >= 2]
    free_rows = [i for i in range(g) if i >= len(diag) or diag[i] == 0]
    keep = torsion_rows + free_rows
    basis_change = IntMatrix([snf.U.row(i) for i in keep], shape=(len(keep), g))
    u_inv = snf.U.inverse_unimodular()
    lifts = IntMatrix([[u_inv[i, j] for j in keep] for i in range(g)], shape=(g, len(keep)))
    return FGAbelianGroup(
        rank=len(free_rows),
        torsion=tuple(diag[i] for i in torsion_rows),
        name=name,
        basis_change=basis_change,
        generator_lifts=lifts,
    )


class HomGroup(FGAbelianGroup):
    """Hom(source, Z_n) in canonical form.

    Coordinates follow the source's canonical generators (skipping torsion
    generators with gcd(d, n) = 1, which only map to 0): a coordinate a on
    a torsion generator of order d means the generator is sent to
    a * n/gcd(d, n) in Z_n, and on a free generator it is sent to a.
    """

    __slots__ = ("source", "n", "gen_info")

    def __init__(self, source: FGAbelianGroup, n: int):
        if n < 2:
            raise ValueError("coefficient modulus must be >= 2")
        gen_info = []  # (source generator index, value multiplier, coordinate order)
        torsion = []
        for i, d in enumerate(source.torsion):
            g = gcd(d, n)
            if g > 1:
                gen_info.append((i, n // g, g))
                torsion.append(g)
        k = len(source.torsion)
        for i in range(source.rank):
            gen_info.append((k + i, 1, n))
            torsion.append(n)
        name = f"Hom({source.name or 'group'}, Z_{n})"
        super().__init__(0, torsion, name=name)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "gen_info", tuple(gen_info))

    def evaluate(self, hom: GroupElement, elem: Union[GroupElement, Sequence[int]]) -> int:
        """Value in Z_n of the homomorphism on a source element."""
        if not hom.group.same_structure(self):
            raise ValueError("hom does not belong to this group")
        coords = elem.coords if isinstance(elem, GroupElement) else tuple(elem)
        if len(coords) != self.source.ngens:
            raise ValueError("element does not belong to the source group")
        total = 0
        for a, (src, mult, _) in zip(hom.coords, self.gen_info):
            total += a * mult * coords[src]
        return total % self.n

    def values_on_generators(self, hom: GroupElement) -> tuple[int, ...]:
        """Images in Z_n of all canonical source generators."""
        vals = [0] * self.source.ngens
        for a, (src, mult, _) in zip(hom.coords, self.gen_info):
            vals[src] = (a * mult) % self.n
        return tuple(vals)


def hom_to_zn(g: FGAbelianGroup, n: int) -> HomGroup:
    return HomGroup(g, n)


def reduce_mod_n(e: GroupElement, n: int) -> GroupElement:
    """Image of an integral class under the coefficient reduction mod n.

    The result lives in Z_n^rank (+) sum of Z_gcd(di, n); it is zero exactly
    when n*x = e is solvable in the integral group, so `.is_zero` is the
    obstruction test.
    """
    if n < 2:
        raise ValueError("modulus must be >= 2")
    G = e.group
    k = len(G.torsion)
    torsion = []
    coords = []
    for d, c in zip(G.torsion, e.coords[:k]):
        g = gcd(d, n)
        if g > 1:
            torsion.append(g)
            coords.append(c % g)
    torsion.extend([n] * G.rank)
    coords.extend(c % n for c in e.coords[k:])
    name = f"{G.name} mod {n}" if G.name else f"mod {n}"
    target = FGAbelianGroup(0, torsion, name=name)
    return target.element(coords)


def group_from_invariant_factors(factors: Sequence[int], name: str = "") -> FGAbelianGroup:
    """Group from an invariant-factor list; zeros denote free summands."""
    factors = [int(d) for d in factors]
    torsion = [d for d in factors if d != 0]
    rank = sum(1 for d in factors if d == 0)
    if factors != torsion + [0] * rank:
        raise ValueError("invariant factors must list torsion first, then zeros")
    return FGAbelianGroup(rank, torsion, name=name)


@dataclass(frozen=True)
class Manifold3Data:
    """Closed oriented 3-manifold data at the level this library needs.

    h1 is derived from pi1; h2 is supplied (it must be isomorphic to h1 by
    Poincare duality).  relator_pairing[k][j] is the integer weight of the
    k-th canonical generator of h2 against the j-th relator; it is the
    orientation datum that turns an Euler class into a central extension.
    """

    name: str
    pi1: GroupPresentation
    h1: FGAbelianGroup
    h2: FGAbelianGroup
    relator_pairing: IntMatrix

    @classmethod
    def build(
        cls,
        name: str,
        pi1: GroupPresentation,
        h2_factors: Sequence[int],
        relator_pairing: Sequence[Sequence[int]],
    ) -> "Manifold3Data":
        h1 = abelianization(pi1)
        h2 = group_from_invariant_factors(h2_factors, name=f"H2({name})")
        if not h1.same_structure(h2):
            raise ValueError(
                f"h2 {h2!r} is not isomorphic to the abelianization {h1!r};"
                " a closed oriented 3-manifold must satisfy Poincare duality"
            )
        pairing = IntMatrix(relator_pairing, shape=(h2.ngens, len(pi1.relators)))
        return cls(name=name, pi1=pi1, h1=h1, h2=h2, relator_pairing=pairing)

    def euler_class(self, coords: Sequence[int]) -> GroupElement:
        return self.h2.element(coords)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.pi1.generators),
            "relators": [list(w) for w in self.pi1.relators],
            "h2": list(self.h2.invariant_factors),
            "relator_pairing": [list(self.relator_pairing.row(i)) for i in range(self.relator_pairing.rows)],
        }

    @classmethod
    def from_json(cls, doc: Union[str, dict]) -> "Manifold3Data":
        if isinstance(doc, str):
            doc = json.loads(doc)
        pi1 = GroupPresentation(
            generators=tuple(doc["generators"]),
            relators=tuple(tuple(w) for w in doc["relators"]),
            name=doc["name"],
        )
        return cls.build(doc["name"], pi1, doc["h2"], doc["relator_pairing"])


def _commutator(i: int, j: int) -> tuple[int, ...]:
    return (i, j, -i, -j)


def builtin_manifold(name: str) -> Manifold3Data:
    """Built-in base manifolds: T3, L4 (torsion example), S3 (trivial H2).

    T3 uses generators (x, y, z), positively oriented; the k-th dual
    generator of H2 pairs with the commutator relator omitting the k-th
    coordinate direction, with weight +1.
    """
    if name == "T3":
        pi1 = GroupPresentation(
            generators=("x", "y", "z"),
            relators=(_commutator(2, 3), _commutator(3, 1), _commutator(1, 2)),
            name="pi1(T3)",
        )
        return Manifold3Data.build("T3", pi1, [0, 0, 0], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    if name == "L4":
        pi1 = GroupPresentation(generators=("g",), relators=((1, 1, 1, 1),), name="pi1(L4)")
        return Manifold3Data.build("L4", pi1, [4], [[1]])
    if name == "S3":
        pi1 = GroupPresentation(generators=("g",), relators=((1,),), name="pi1(S3)")
        return Manifold3Data.build("S3", pi1, [], [])
    raise KeyError(f"unknown built-in manifold {name!r} (have T3, L4, S3)")
