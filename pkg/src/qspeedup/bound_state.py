"""Bound-state solver: the unique negative root of K(E) = E.

K(E) = omega0 - c * I(E) with c the collective multiplicity and I the
reservoir integral.  On E < 0, K is strictly decreasing from omega0 (at
E -> -inf) to -inf (at E -> 0-), so K(E) - E has exactly one sign change
whenever the coupling is nonzero.  Weak coupling pushes the root
exponentially close to zero, hence the bracketing probes and the bisection
both work geometrically on the energy axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .spectral import ModelParams, reservoir_integral

RESIDUAL_TOL = 1e-10
BRACKET_FLOOR = -1e-16
MAX_PROBES = 200
MAX_BISECTIONS = 65


class BracketFailureError(RuntimeError):
    """No sign change of K(E) - E found between the probe limits."""


@dataclass(frozen=True)
class BoundStateResult:
    exists: bool
    energy: float | None
    residual: float | None
    bracket: tuple[float, float] | None
    iterations: int


def kernel_k(e, params: ModelParams):
    """The fixed-point map whose root below zero is the bound-state energy."""
    return params.omega0 - params.collective_factor() * reservoir_integral(e, params)


def find_bound_state(params: ModelParams, tol: float = RESIDUAL_TOL) -> BoundStateResult:
    """Locate the unique E < 0 with K(E) = E.

    Returns exists=False only for gamma0 = 0, where K is constant at omega0
    and never crosses the diagonal below zero.  Raises BracketFailureError
    when the coupling is weak enough that the root lies beyond the probe
    floor of -1e-16.
    """
    if params.gamma0 == 0.0:
        return BoundStateResult(False, None, None, None, 0)

    def h(e: float) -> float:
        return kernel_k(e, params) - e

    probes = 0
    hi = None
    mag = 1e-2
    while mag >= -BRACKET_FLOOR:
        cand = -mag
        probes += 1
        if h(cand) < 0.0:
            hi = cand
            break
        mag *= 1e-2
    if hi is None:
        raise BracketFailureError(
            "no sign change of K(E) - E above the probe floor "
            f"{BRACKET_FLOOR:g}; coupling gamma0={params.gamma0:g} is too weak "
            "for the root to be representable")

    lo = -1.0
    while h(lo) <= 0.0:
        probes += 1
        lo *= 2.0
        if probes > MAX_PROBES:
            raise BracketFailureError(
                f"no sign change of K(E) - E within {MAX_PROBES} bracket probes")

    # Bisect on log|E|: the geometric midpoint keeps the relative width
    # shrinking, which is what the residual needs when the root sits many
    # orders of magnitude below the outer bracket edge.
    iterations = 0
    energy = hi
    residual = abs(h(hi))
    for _ in range(MAX_BISECTIONS):
        mid = -math.sqrt(lo * hi)
        if not lo < mid < hi:
            break
        iterations += 1
        val = h(mid)
        if abs(val) < residual:
            energy, residual = mid, abs(val)
        if val > 0.0:
            lo = mid
        elif val < 0.0:
            hi = mid
        else:
            lo = hi = mid
            break
        if residual < 0.01 * tol:
            break
    if residual >= tol * max(1.0, abs(energy)):
        raise RuntimeError(
            f"bisection stalled at residual {residual:g} for {params!r}")
    # the best midpoint may have become a bracket edge; keep it strictly inside
    if energy <= lo:
        lo = math.nextafter(lo, -math.inf)
    if energy >= hi:
        hi = math.nextafter(hi, 0.0)
    return BoundStateResult(True, energy, residual, (lo, hi), iterations)
