"""Certified winding numbers for sampled circle maps.

Angles are measured in turns (one full circle = 1).  A step between
consecutive samples is trusted only when its shortest-arc representative is
strictly below a quarter turn; a continuous map sampled that densely cannot
alias, so the accumulated total is the true winding number up to float
noise.  When a step fails the bound the sampling is doubled, up to a hard
limit, after which the input is rejected as non-continuous (or too wild to
certify).
"""

from __future__ import annotations

from typing import Callable, Sequence

MAX_STEP = 0.25


class WindingError(Exception):
    """Base class for winding certification failures."""


class StepTooLargeError(WindingError):
    """Consecutive samples moved a quarter turn or more."""


class RefinementLimitError(WindingError):
    """Certification still failed at the maximum sampling resolution."""


class DegenerateValueError(WindingError):
    """A sample produced no usable angle (zero vector under projection)."""


def principal_step(prev: float, cur: float) -> float:
    """Shortest-arc increment from prev to cur, in (-1/2, 1/2]."""
    d = (cur - prev) % 1.0
    if d > 0.5:
        d -= 1.0
    return d


def tracked_total(angles: Sequence[float], close: bool = True) -> float:
    """Accumulated signed turns along a sample sequence.

    With close=True the step from the last sample back to the first is
    included, so the result of a closed loop is (numerically) an integer.
    Raises StepTooLargeError when any step reaches a quarter turn.
    """
    if len(angles) < 2:
        raise ValueError("need at least two samples")
    total = 0.0
    for a, b in zip(angles, angles[1:]):
        d = principal_step(a, b)
        if abs(d) >= MAX_STEP:
            raise StepTooLargeError(f"step of {d:+.3f} turns between consecutive samples")
        total += d
    if close:
        d = principal_step(angles[-1], angles[0])
        if abs(d) >= MAX_STEP:
            raise StepTooLargeError(f"closing step of {d:+.3f} turns")
        total += d
    return total


def closed_loop_winding(angles: Sequence[float]) -> int:
    """Winding number of a closed loop given by angle samples."""
    total = tracked_total(angles, close=True)
    k = round(total)
    if abs(total - k) > 0.25:
        raise WindingError(f"closed loop accumulated a non-integer total {total:.6f}")
    return k


def winding_number(
    angle_fn: Callable[[float], float],
    samples: int = 64,
    max_samples: int = 4096,
) -> int:
    """Winding number of s -> angle_fn(s) over one period, with refinement.

    angle_fn takes s in [0, 1) and returns an angle in turns; it may raise
    DegenerateValueError, which also triggers refinement.
    """
    if samples < 4:
        raise ValueError("need at least 4 initial samples")
    m = samples
    last = "no samples taken"
    while m <= max_samples:
        try:
            angles = [angle_fn(i / m) % 1.0 for i in range(m)]
            return closed_loop_winding(angles)
        except (StepTooLargeError, DegenerateValueError) as err:
            last = str(err)
            m *= 2
    raise RefinementLimitError(
        f"could not certify winding at {max_samples} samples: {last}"
    )


def projective_half_turns(
    line_fn: Callable[[float], tuple[float, float]],
    samples: int = 64,
    max_samples: int = 4096,
    degeneracy_tol: float = 1e-9,
) -> int:
    """Half-turns of a loop of lines through the origin of the plane.

    line_fn returns a (possibly unnormalized) direction vector of the line
    at parameter s.  The line angle is doubled so that the quarter-turn
    step rule applies verbatim; the result counts half-turns of the line.
    """
    from math import atan2, hypot, pi

    def doubled(s: float) -> float:
        a, b = line_fn(s)
        if hypot(a, b) < degeneracy_tol:
            raise DegenerateValueError(f"zero direction vector at s={s}")
        return atan2(b, a) / pi

    return winding_number(doubled, samples=samples, max_samples=max_samples)
