"""Lorentzian reservoir: spectral density and its negative-energy integral.

The reservoir seen by the atoms is a Lorentzian of width lam centred on the
atomic frequency omega0,

    J(w) = gamma0 * lam**2 / (2*pi*((w - omega0)**2 + lam**2)),

restricted to w >= 0.  Everything downstream (bound-state kernels, decay
envelopes) is driven by the principal integral

    I(E) = int_0^inf J(w) / (w - E) dw,  E < 0,

which is finite for all negative E because the denominator never vanishes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import adaptive_simpson


class AtomKind(enum.Enum):
    TWO_LEVEL = "two-level"
    THREE_LEVEL_V = "three-level-v"


@dataclass(frozen=True)
class ModelParams:
    """One ensemble of identical emitters coupled to a shared reservoir.

    All frequencies are in units of omega0 unless omega0 is set explicitly.
    theta is the relative orientation of the two dipoles of a V-type emitter
    (cos of the angle between them); it must be 0 for two-level emitters,
    where the second transition does not exist.
    """

    gamma0: float
    lam: float = 2.0
    n_atoms: int = 1
    theta: float = 0.0
    omega0: float = 1.0
    kind: AtomKind = AtomKind.TWO_LEVEL

    def __post_init__(self):
        if not isinstance(self.n_atoms, (int, np.integer)) or isinstance(self.n_atoms, bool):
            raise ValueError("n_atoms must be an integer >= 1")
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        if not self.omega0 > 0:
            raise ValueError("omega0 must be > 0")
        if not self.lam > 0:
            raise ValueError("lam must be > 0")
        if self.gamma0 < 0:
            raise ValueError("gamma0 must be >= 0")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if self.kind is AtomKind.TWO_LEVEL and self.theta != 0.0:
            raise ValueError("theta must be 0 for two-level emitters")

    def collective_factor(self) -> float:
        """Multiplicity of the reservoir integral in the bound-state kernel.

        N identical two-level emitters act as a single emitter with N times
        the coupling; a V-type emitter contributes both dipoles, (1 + theta)
        per atom, through its symmetric channel.
        """
        if self.kind is AtomKind.THREE_LEVEL_V:
            return self.n_atoms * (1.0 + self.theta)
        return float(self.n_atoms)


def lorentzian_j(omega, params: ModelParams):
    """Spectral density at frequency omega (scalar or array, omega >= 0)."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be >= 0")
    num = params.gamma0 * params.lam ** 2
    den = 2.0 * np.pi * ((omega - params.omega0) ** 2 + params.lam ** 2)
    out = num / den
    return out if out.ndim else float(out)


def total_spectral_weight(params: ModelParams) -> float:
    """int_0^inf J(w) dw, the full weight of the positive-frequency band."""
    return params.gamma0 * params.lam / (2.0 * np.pi) * (
        0.5 * np.pi + math.atan(params.omega0 / params.lam))


def reservoir_integral(e, params: ModelParams):
    """I(E) = int_0^inf J(w)/(w - E) dw for E < 0, in closed form.

    Scalar or array E.  The log of the squared energy is written as a
    difference of logs so the expression survives |E| down to the smallest
    normal floats (E**2 would underflow long before).
    """
    e = np.asarray(e, dtype=float)
    if np.any(e >= 0):
        raise ValueError("reservoir integral requires E < 0")
    w0, lam = params.omega0, params.lam
    m = (w0 - e) ** 2 + lam ** 2
    bracket = ((w0 - e) / lam) * (0.5 * np.pi + math.atan(w0 / lam)) \
        + 0.5 * math.log(w0 ** 2 + lam ** 2) - np.log(-e)
    out = params.gamma0 * lam ** 2 / (2.0 * np.pi * m) * bracket
    return out if out.ndim else float(out)


def reservoir_integral_quad(e: float, params: ModelParams, tol: float = 1e-13) -> float:
    """I(E) by direct quadrature; slow cross-check for the closed form.

    Splits at omega0 and omega0 + 10 lam, then maps the tail through
    u = 1/w so the infinite range becomes a finite smooth integral.
    """
    e = float(e)
    if e >= 0:
        raise ValueError("reservoir integral requires E < 0")
    w0, lam = params.omega0, params.lam

    def body(w):
        return lorentzian_j(w, params) / (w - e)

    cut = w0 + 10.0 * lam

    def tail(u):
        # J(1/u)/((1/u) - e) * du-Jacobian (1/u**2), simplified to stay
        # finite at u = 0
        num = params.gamma0 * lam ** 2 * u
        den = 2.0 * np.pi * ((1.0 - w0 * u) ** 2 + (lam * u) ** 2) * (1.0 - e * u)
        return num / den

    return (adaptive_simpson(body, 0.0, w0, tol)
            + adaptive_simpson(body, w0, cut, tol)
            + adaptive_simpson(tail, 0.0, 1.0 / cut, tol))
