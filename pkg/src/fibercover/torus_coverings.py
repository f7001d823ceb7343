"""Fiberwise coverings of the trivial circle bundle over the 3-torus.

The 4-torus is coordinatized as (x, y, z, theta) with every circle taken
as R/Z.  An explicit covering of fiberwise degree n twists the fiber angle
by an integer triple; a black-box covering is any user-supplied fiberwise
degree-n map, trusted to be continuous but sampled defensively.  The
classifying triple is recovered per standard generator loop as the winding
number of the fiber angle along a lift, taken at constant theta.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence, Union

from .winding import closed_loop_winding, winding_number

AXIS_NAMES = ("x", "y", "z")


@dataclass(frozen=True)
class TorusPoint:
    """Point of the 4-torus; coordinates normalized into [0, 1)."""

    x: float
    y: float
    z: float
    theta: float

    def __post_init__(self):
        for name in ("x", "y", "z", "theta"):
            object.__setattr__(self, name, float(getattr(self, name)) % 1.0)

    @property
    def base(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


class TorusCoveringMap:
    """Fiberwise degree-n self-map of the 4-torus over the identity."""

    n: int

    def __call__(self, p: TorusPoint) -> TorusPoint:
        raise NotImplementedError


class ExplicitCovering(TorusCoveringMap):
    """(p, theta) -> (p, n*theta + <alpha, p>), alpha reduced mod n."""

    def __init__(self, n: int, alpha: Sequence[int]):
        if n < 2:
            raise ValueError("covering degree must be >= 2")
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != 3:
            raise ValueError("alpha must be an integer triple")
        self.n = n
        self.alpha = tuple(a % n for a in alpha)

    def __call__(self, p: TorusPoint) -> TorusPoint:
        twist = sum(a * c for a, c in zip(self.alpha, p.base))
        return TorusPoint(p.x, p.y, p.z, self.n * p.theta + twist)

    def __repr__(self) -> str:
        return f"ExplicitCovering(n={self.n}, alpha={self.alpha})"


class BlackBoxCovering(TorusCoveringMap):
    """Covering given by an arbitrary sampler; must be fiberwise degree n."""

    def __init__(self, n: int, sampler: Callable[[TorusPoint], TorusPoint]):
        if n < 2:
            raise ValueError("covering degree must be >= 2")
        self.n = n
        self.sampler = sampler

    def __call__(self, p: TorusPoint) -> TorusPoint:
        return self.sampler(p)


def build_phi_alpha(n: int, alpha: Sequence[int]) -> ExplicitCovering:
    return ExplicitCovering(n, alpha)


def classify_covering_map(
    phi: TorusCoveringMap,
    samples_per_loop: int = 64,
    max_samples: int = 4096,
    basepoint: Sequence[float] = (0.0, 0.0, 0.0),
    lift_theta: float = 0.0,
) -> tuple[int, int, int]:
    """Classifying triple mod n of a fiberwise n-fold covering.

    Each standard generator loop of the base, lifted at constant theta, is
    pushed through phi and the fiber-angle winding is tracked with the
    certified quarter-turn rule.  The triple is normalized into [0, n-1]^3.
    The winding itself depends on the lift, but only through multiples of
    n, so the output does not.
    """
    n = phi.n
    result = []
    for axis in range(3):
        def angle(s: float, axis=axis) -> float:
            coords = list(basepoint)
            coords[axis] += s
            return phi(TorusPoint(*coords, lift_theta)).theta

        deg = winding_number(angle, samples=samples_per_loop, max_samples=max_samples)
        result.append(deg % n)
    return tuple(result)


def equivalence_test(
    alpha_a: Sequence[int], alpha_b: Sequence[int], n: int
) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Whether two twisting triples give equivalent coverings.

    Raw integer triples are equivalent iff they agree mod n componentwise;
    the witness (a, b, c) = (alpha_b - alpha_a) / n realizes the covering
    isomorphism as the unipotent automorphism shearing the fiber.
    """
    if n < 2:
        raise ValueError("covering degree must be >= 2")
    a = tuple(int(v) for v in alpha_a)
    b = tuple(int(v) for v in alpha_b)
    if len(a) != 3 or len(b) != 3:
        raise ValueError("twisting data must be integer triples")
    if any((u - v) % n for u, v in zip(a, b)):
        return False, None
    return True, tuple((v - u) // n for u, v in zip(a, b))


def classify_sampled_loops(
    loops: Mapping[str, Sequence], n: int
) -> tuple[int, int, int]:
    """Classifying triple from tabulated fiber angles along the three loops.

    Each loop is either a list of output angles at uniform parameters or a
    list of [s, angle] pairs.  No refinement is possible for tabulated
    data: an overlarge step is a hard error.
    """
    if n < 2:
        raise ValueError("covering degree must be >= 2")
    result = []
    for name in AXIS_NAMES:
        if name not in loops:
            raise ValueError(f"missing samples for the {name}-loop")
        raw = list(loops[name])
        if raw and isinstance(raw[0], (list, tuple)):
            raw.sort(key=lambda st: float(st[0]))
            angles = [float(st[1]) % 1.0 for st in raw]
        else:
            angles = [float(v) % 1.0 for v in raw]
        if len(angles) < 4:
            raise ValueError(f"too few samples for the {name}-loop")
        result.append(closed_loop_winding(angles) % n)
    return tuple(result)


def load_map_samples(doc: Union[str, dict]) -> tuple[dict, int]:
    """Parse the tabulated-samples JSON document: {n, loops: {x, y, z}}."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        n = int(doc["n"])
        loops = doc["loops"]
    except (KeyError, TypeError) as err:
        raise ValueError(f"malformed map-sample document: {err}") from err
    return loops, n
