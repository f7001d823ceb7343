"""Circle bundles over 3-manifolds and their fiberwise n-fold coverings.

A bundle is its base plus an Euler class.  Existence of a connected
fiberwise n-fold covering is obstructed exactly by the mod-n reduction of
the Euler class; when unobstructed, the isomorphism classes form a torsor
over H^1(base; Z_n), which this module enumerates explicitly.  The
degree-one cohomology of the total space is reached through a central
extension presentation of its fundamental group, which is enough to verify
the four-term exact sequence

    0 -> H^1(M; Z_n) -> H^1(P; Z_n) -> H^1(S^1; Z_n) -> H^2(M; Z_n)

by brute-force set computations at desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iter_product
from math import gcd
from pathlib import Path
from typing import Optional, Sequence, Union

from .groups import (
    FGAbelianGroup,
    GroupElement,
    GroupPresentation,
    HomGroup,
    Manifold3Data,
    abelianization,
    builtin_manifold,
    hom_to_zn,
    reduce_mod_n,
)


@dataclass(frozen=True)
class CircleBundle:
    """Oriented circle bundle over a 3-manifold, given by its Euler class."""

    base: Manifold3Data
    euler: GroupElement
    oriented: bool = True

    def __post_init__(self):
        if not self.euler.group.same_structure(self.base.h2):
            raise ValueError("Euler class does not live in H2 of the base")

    @classmethod
    def from_json(cls, doc: Union[str, dict]) -> "CircleBundle":
        """Bundle spec {base: name-or-inline-manifold, euler: coordinate list}."""
        if isinstance(doc, str):
            doc = json.loads(doc)
        base = doc["base"]
        if isinstance(base, str):
            base = builtin_manifold(base)
        else:
            base = Manifold3Data.from_json(base)
        return cls(base=base, euler=base.h2.element(doc["euler"]))


@dataclass(frozen=True)
class FiberwiseCoveringClass:
    """One isomorphism class of fiberwise n-fold coverings of `downstairs`.

    The classifying datum is `alpha`; `upstairs_euler` is a chosen solution
    of n * e(Q) = e(P) (the same one for every class, since the upstairs
    Euler class does not separate classes).
    """

    downstairs: CircleBundle
    n: int
    alpha: GroupElement
    upstairs_euler: GroupElement

    def __post_init__(self):
        if (self.n * self.upstairs_euler).coords != self.downstairs.euler.coords:
            raise ValueError("upstairs Euler class does not divide the downstairs one")


def obstruction_vanishes(P: CircleBundle, n: int) -> bool:
    """A fiberwise n-fold covering exists iff the mod-n Euler class is zero."""
    if n < 2:
        raise ValueError("covering degree must be >= 2")
    return reduce_mod_n(P.euler, n).is_zero


def covering_euler_classes(P: CircleBundle, n: int) -> list[GroupElement]:
    """All x in H^2(base) with n*x = e(P); empty exactly when obstructed."""
    if n < 2:
        raise ValueError("covering degree must be >= 2")
    G = P.euler.group
    k = len(G.torsion)
    per_coord: list[list[int]] = []
    for d, e in zip(G.torsion, P.euler.coords[:k]):
        g = gcd(n, d)
        if e % g != 0:
            return []
        dg = d // g
        x0 = ((e // g) * pow(n // g, -1, dg)) % dg if dg > 1 else 0
        per_coord.append(sorted((x0 + t * dg) % d for t in range(g)))
    for e in P.euler.coords[k:]:
        if e % n != 0:
            return []
        per_coord.append([e // n])
    return [G.element(coords) for coords in iter_product(*per_coord)]


@dataclass(frozen=True)
class CoveringEnumeration:
    """Torsor description: the acting group H^1(M; Z_n) and one class per element."""

    bundle: CircleBundle
    n: int
    obstructed: bool
    hom_group: Optional[HomGroup]
    classes: tuple[FiberwiseCoveringClass, ...]

    def to_json(self) -> dict:
        out = {
            "base": self.bundle.base.name,
            "euler": list(self.bundle.euler.coords),
            "n": self.n,
            "obstructed": self.obstructed,
        }
        if not self.obstructed:
            out["group_order"] = self.hom_group.order()
            out["group_invariant_factors"] = list(self.hom_group.invariant_factors)
            out["classes"] = [
                {"alpha": list(c.alpha.coords), "upstairs_euler": list(c.upstairs_euler.coords)}
                for c in self.classes
            ]
        return out


def enumerate_covering_classes(P: CircleBundle, n: int) -> CoveringEnumeration:
    """One covering class per element of H^1(base; Z_n), or the obstructed marker."""
    if n < 2:
        raise ValueError("covering degree must be >= 2")
    candidates = covering_euler_classes(P, n)
    if not candidates:
        return CoveringEnumeration(P, n, True, None, ())
    chosen = min(candidates, key=lambda e: e.coords)
    hom = hom_to_zn(P.base.h1, n)
    classes = tuple(
        FiberwiseCoveringClass(downstairs=P, n=n, alpha=a, upstairs_euler=chosen)
        for a in hom.elements()
    )
    return CoveringEnumeration(P, n, False, hom, classes)


def central_extension_presentation(M: Manifold3Data, e: GroupElement) -> GroupPresentation:
    """Fundamental group of the circle bundle over M with Euler class e.

    Generators are those of pi1(M) plus a central fiber generator t; each
    relator r picks up t^-w where w pairs the Euler class with r.
    """
    if not e.group.same_structure(M.h2):
        raise ValueError("Euler class does not live in H2 of the base")
    if M.relator_pairing.rows != M.h2.ngens or M.relator_pairing.cols != len(M.pi1.relators):
        raise ValueError("relator pairing has the wrong shape")
    g = len(M.pi1.generators)
    fiber = "t"
    while fiber in M.pi1.generators:
        fiber += "_"
    t_idx = g + 1
    relators = []
    for j, word in enumerate(M.pi1.relators):
        w = sum(e.coords[k] * M.relator_pairing[k, j] for k in range(M.h2.ngens))
        tail = (-t_idx,) * w if w >= 0 else (t_idx,) * (-w)
        relators.append(tuple(word) + tail)
    for i in range(1, g + 1):
        relators.append((i, t_idx, -i, -t_idx))
    return GroupPresentation(
        generators=M.pi1.generators + (fiber,),
        relators=tuple(relators),
        name=f"pi1(bundle over {M.name}, e={list(e.coords)})",
        central=fiber,
    )


def _pullback_values(
    base_hom_group: HomGroup,
    base_hom: GroupElement,
    total_h1: FGAbelianGroup,
    base_h1: FGAbelianGroup,
) -> tuple[int, ...]:
    """Values on canonical generators of H1(P) of a base hom composed with
    the projection killing the fiber generator."""
    values = []
    for j in range(total_h1.ngens):
        lift = total_h1.lift_generator(j)
        downstairs = base_h1.project(lift[:-1])
        values.append(base_hom_group.evaluate(base_hom, downstairs))
    return tuple(values)


@dataclass(frozen=True)
class GysinReport:
    """Exactness verdicts for the four-term sequence of a circle bundle."""

    base: str
    euler: tuple[int, ...]
    n: int
    order_h1_base: int
    order_h1_total: int
    order_kernel_d: int
    pi_star_injective: bool
    exact_at_total: bool
    exact_at_fiber: bool
    counting_identity: bool

    @property
    def passed(self) -> bool:
        return (
            self.pi_star_injective
            and self.exact_at_total
            and self.exact_at_fiber
            and self.counting_identity
        )

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "euler": list(self.euler),
            "n": self.n,
            "orders": {
                "h1_base": self.order_h1_base,
                "h1_total": self.order_h1_total,
                "kernel_d": self.order_kernel_d,
            },
            "pi_star_injective": self.pi_star_injective,
            "exact_at_total_space": self.exact_at_total,
            "exact_at_fiber": self.exact_at_fiber,
            "counting_identity": self.counting_identity,
            "passed": self.passed,
        }


def gysin_check(P: CircleBundle, n: int) -> GysinReport:
    """Verify exactness of the covering sequence for P by explicit maps.

    Pullback along the projection, restriction to the fiber, and the
    transgression k -> k * e_n are computed on enumerated homomorphism
    groups, so every spot is checked set-theoretically.
    """
    if n < 2:
        raise ValueError("coefficient modulus must be >= 2")
    M = P.base
    pres = central_extension_presentation(M, P.euler)
    h1_total = abelianization(pres)
    hom_total = hom_to_zn(h1_total, n)
    hom_base = hom_to_zn(M.h1, n)

    g = len(M.pi1.generators)
    fiber_class = h1_total.project((0,) * g + (1,))

    total_homs = list(hom_total.elements())
    total_value_tuples = {hom_total.values_on_generators(h) for h in total_homs}

    # pullback: precompose with the quotient killing the fiber generator
    image_pi_star = set()
    for phi in hom_base.elements():
        vals = _pullback_values(hom_base, phi, h1_total, M.h1)
        if vals not in total_value_tuples:
            raise AssertionError("pullback did not land in Hom(H1(P), Z_n); bad pairing data?")
        image_pi_star.add(vals)
    order_base = hom_base.order()
    pi_star_injective = len(image_pi_star) == order_base

    # fiber restriction: evaluate at the fiber class
    def restrict(values: tuple[int, ...]) -> int:
        return sum(v * c for v, c in zip(values, fiber_class.coords)) % n

    kernel_iota = {vals for vals in total_value_tuples if restrict(vals) == 0}
    image_iota = {restrict(vals) for vals in total_value_tuples}

    # transgression: k -> k * e_n, with kernel read off the integral class
    kernel_d = {k for k in range(n) if reduce_mod_n(k * P.euler, n).is_zero}

    order_total = len(total_value_tuples)
    return GysinReport(
        base=M.name,
        euler=P.euler.coords,
        n=n,
        order_h1_base=order_base,
        order_h1_total=order_total,
        order_kernel_d=len(kernel_d),
        pi_star_injective=pi_star_injective,
        exact_at_total=image_pi_star == kernel_iota,
        exact_at_fiber=image_iota == kernel_d,
        counting_identity=order_total == order_base * len(kernel_d),
    )


def load_bundle(source: Union[str, Path, dict]) -> CircleBundle:
    """Load a bundle spec from a JSON document, file path, or dict."""
    if isinstance(source, dict):
        return CircleBundle.from_json(source)
    text = Path(source).read_text() if Path(str(source)).exists() else str(source)
    return CircleBundle.from_json(text)
