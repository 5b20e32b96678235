"""Closed-form single-excitation dynamics in a shared Lorentzian reservoir.

Everything reduces to one scalar envelope

    g(t) = exp(-lam*t/2) * (cosh(d*t/2) + (lam/d) * sinh(d*t/2)),

where d = sqrt(lam**2 - 2*w*lam) carries the effective kernel weight w of
the channel: w = gamma0*N for N two-level emitters and w = gamma0*N*(1 +- theta)
for the symmetric/antisymmetric channels of V-type emitters.  d is real in
the overdamped regime and switches to a positive imaginary value once the
collective coupling is strong enough for the envelope to oscillate; both
regimes are covered by evaluating the same expression over the complex d.

The fully symmetric initial condition (every emitter sharing the excitation
equally) evolves without leaving the symmetric sector, which gives the
single-amplitude forms alpha1 / nu1 below; the general propagators accept
arbitrary per-emitter initial amplitudes.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from .spectral import AtomKind, ModelParams

ROOT_HALF = math.sqrt(0.5)


def principal_sqrt(x: float) -> complex:
    """sqrt on the principal branch: nonnegative real or positive imaginary."""
    return cmath.sqrt(complex(x, 0.0))


@dataclass(frozen=True)
class PropagatorParams:
    """Channel constants of the decay envelope for one parameter point."""

    lam: float
    n_atoms: int
    d_two_level: complex
    d_plus: complex
    d_minus: complex

    @classmethod
    def from_model(cls, params: ModelParams) -> "PropagatorParams":
        return _propagator_for(params)


@functools.lru_cache(maxsize=4096)
def _propagator_for(params: ModelParams) -> PropagatorParams:
    lam, g0, n = params.lam, params.gamma0, params.n_atoms
    return PropagatorParams(
        lam=lam,
        n_atoms=n,
        d_two_level=principal_sqrt(lam * lam - 2.0 * g0 * lam * n),
        d_plus=principal_sqrt(lam * lam - 2.0 * g0 * (1.0 + params.theta) * lam * n),
        d_minus=principal_sqrt(lam * lam - 2.0 * g0 * (1.0 - params.theta) * lam * n),
    )


def _sinhc(x: np.ndarray) -> np.ndarray:
    """sinh(x)/x, continued through x = 0 by its Taylor series."""
    x = np.asarray(x, dtype=complex)
    out = np.empty_like(x)
    small = np.abs(x) < 5e-7
    xs = x[small]
    out[small] = 1.0 + xs * xs / 6.0 * (1.0 + xs * xs / 20.0)
    xl = x[~small]
    out[~small] = np.sinh(xl) / xl
    return out


def g_factor(t, d: complex, lam: float):
    """Decay envelope g(t); scalar or array t >= 0.

    Written with sinh(x)/x so the degenerate channel d -> 0 (critical
    coupling) evaluates without a 0/0.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    x = (0.5 * complex(d)) * t
    out = np.exp(-0.5 * lam * t) * (np.cosh(x) + (0.5 * lam) * t * _sinhc(x))
    return out if out.ndim else complex(out)


def g_factor_dt(t, d: complex, lam: float):
    """Time derivative of the envelope: dg/dt = -w*(t/2)*exp(-lam*t/2)*sinhc(d*t/2).

    The prefactor w = (lam**2 - d**2)/2 is recovered from d itself, so the
    derivative shares the envelope's parametrisation exactly.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    w = 0.5 * (lam * lam - complex(d) ** 2).real
    x = (0.5 * complex(d)) * t
    out = (-w * 0.5) * t * np.exp(-0.5 * lam * t) * _sinhc(x)
    return out if out.ndim else complex(out)


def _channel(params: ModelParams):
    prop = PropagatorParams.from_model(params)
    if params.kind is AtomKind.THREE_LEVEL_V:
        return prop.d_plus, prop.lam, prop.n_atoms
    return prop.d_two_level, prop.lam, prop.n_atoms


def alpha1(t, params: ModelParams, initial: complex = 1.0):
    """Symmetric excited amplitude of N two-level emitters.

    alpha1(0) = initial exactly; the (g - 1)/N form keeps the t = 0 value
    free of rounding.
    """
    if params.kind is not AtomKind.TWO_LEVEL:
        raise ValueError("alpha1 applies to two-level emitters")
    d, lam, n = _channel(params)
    return initial * (1.0 + (g_factor(t, d, lam) - 1.0) / n)


def nu1(t, params: ModelParams, initial: complex = ROOT_HALF):
    """Per-transition excited amplitude of N V-type emitters (symmetric channel).

    The antisymmetric channel of the equal-superposition initial state
    vanishes identically, so one envelope suffices.
    """
    if params.kind is not AtomKind.THREE_LEVEL_V:
        raise ValueError("nu1 applies to V-type emitters")
    d, lam, n = _channel(params)
    return initial * (1.0 + (g_factor(t, d, lam) - 1.0) / n)


def amplitude_rate(t, params: ModelParams, initial: complex | None = None):
    """d/dt of alpha1 (two-level) or nu1 (V-type) for the same initial value."""
    if initial is None:
        initial = 1.0 if params.kind is AtomKind.TWO_LEVEL else ROOT_HALF
    d, lam, n = _channel(params)
    return initial * g_factor_dt(t, d, lam) / n


def excited_population(t, params: ModelParams):
    """Total excited-state population of the shared excitation.

    |alpha1|**2 for two-level emitters; a V-type emitter holds the
    excitation in two upper levels, 2*|nu1|**2.
    """
    if params.kind is AtomKind.THREE_LEVEL_V:
        amp = nu1(t, params)
        return 2.0 * _abs2(amp)
    amp = alpha1(t, params)
    return _abs2(amp)


def population_rate(t, params: ModelParams):
    """Analytic d/dt of excited_population (no finite differences)."""
    if params.kind is AtomKind.THREE_LEVEL_V:
        amp = nu1(t, params)
        scale = 2.0
    else:
        amp = alpha1(t, params)
        scale = 1.0
    damp = amplitude_rate(t, params)
    out = 2.0 * scale * np.real(np.conjugate(amp) * damp)
    return out if np.ndim(out) else float(out)


def _abs2(z):
    out = np.real(np.conjugate(z) * z)
    return out if np.ndim(out) else float(out)


def propagate_two_level(t: float, initials, params: ModelParams) -> np.ndarray:
    """Evolve arbitrary per-emitter amplitudes; returns the N amplitudes at t.

    Each amplitude moves only through the collective sum s0 of the initial
    ones: a_l(t) = a_l(0) + (g(t) - 1) * s0 / N.
    """
    if params.kind is not AtomKind.TWO_LEVEL:
        raise ValueError("propagate_two_level applies to two-level emitters")
    initials = np.asarray(initials, dtype=complex)
    if initials.shape != (params.n_atoms,):
        raise ValueError("need one initial amplitude per emitter")
    d, lam, n = _channel(params)
    g = g_factor(float(t), d, lam)
    return initials + (g - 1.0) * initials.sum() / n


def propagate_three_level(t: float, initials_a, initials_b, params: ModelParams):
    """Evolve arbitrary per-emitter V-type amplitudes (both transitions).

    The +- combinations nu_a +- nu_b decouple; each obeys the two-level
    update with its own envelope.  Returns (amps_a, amps_b) at time t.
    """
    if params.kind is not AtomKind.THREE_LEVEL_V:
        raise ValueError("propagate_three_level applies to V-type emitters")
    a = np.asarray(initials_a, dtype=complex)
    b = np.asarray(initials_b, dtype=complex)
    if a.shape != (params.n_atoms,) or b.shape != (params.n_atoms,):
        raise ValueError("need one initial amplitude per emitter and transition")
    prop = PropagatorParams.from_model(params)
    n = prop.n_atoms
    plus = a + b
    minus = a - b
    g_plus = g_factor(float(t), prop.d_plus, prop.lam)
    g_minus = g_factor(float(t), prop.d_minus, prop.lam)
    plus_t = plus + (g_plus - 1.0) * plus.sum() / n
    minus_t = minus + (g_minus - 1.0) * minus.sum() / n
    return 0.5 * (plus_t + minus_t), 0.5 * (plus_t - minus_t)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Amplitude, population and analytic population rate on a uniform grid."""

    times: np.ndarray
    amplitude: np.ndarray
    population: np.ndarray
    population_rate: np.ndarray

    def __len__(self) -> int:
        return len(self.times)


def trajectory(params: ModelParams, tau: float, steps: int = 4096) -> Trajectory:
    """Sample the symmetric-channel evolution on steps+1 uniform points."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    times = np.linspace(0.0, float(tau), steps + 1)
    if params.kind is AtomKind.THREE_LEVEL_V:
        amp = nu1(times, params)
        scale = 2.0
    else:
        amp = alpha1(times, params)
        scale = 1.0
    pop_c = scale * np.conjugate(amp) * amp
    if np.abs(pop_c.imag).max() >= 1e-13:
        raise FloatingPointError("population picked up an imaginary residue")
    pop = pop_c.real
    if pop.min() < -1e-12 or pop.max() > 1.0 + 1e-12:
        raise FloatingPointError("population left [0, 1] beyond rounding slack")
    rate = np.asarray(population_rate(times, params), dtype=float)
    return Trajectory(times, amp, np.clip(pop, 0.0, 1.0), rate)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A 2x2 or 3x3 reduced state with its physicality checks."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def validate(self) -> "DensityMatrix":
        m = self.entries
        if m.shape not in ((2, 2), (3, 3)):
            raise ValueError("density matrix must be 2x2 or 3x3")
        if np.abs(m - m.conj().T).max() > 1e-14:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(m).min() < -1e-12:
            raise ValueError("density matrix has a negative eigenvalue")
        return self


def _density_ops(times: np.ndarray, params: ModelParams, ground_amplitude: complex):
    """Vectorised reduced states and their analytic rates on a time grid."""
    a0 = complex(ground_amplitude)
    if abs(a0) > 1.0:
        raise ValueError("ground amplitude exceeds normalization")
    n = len(times)
    if params.kind is AtomKind.TWO_LEVEL:
        exc0 = math.sqrt(max(0.0, 1.0 - abs(a0) ** 2))
        amp = np.atleast_1d(alpha1(times, params, initial=exc0))
        damp = np.atleast_1d(amplitude_rate(times, params, initial=exc0))
        p = (np.conjugate(amp) * amp).real
        dp = 2.0 * (np.conjugate(amp) * damp).real
        rho = np.zeros((n, 2, 2), dtype=complex)
        rho[:, 0, 0] = p
        rho[:, 0, 1] = np.conjugate(a0) * amp
        rho[:, 1, 0] = a0 * np.conjugate(amp)
        rho[:, 1, 1] = 1.0 - p
        rate = np.zeros((n, 2, 2), dtype=complex)
        rate[:, 0, 0] = dp
        rate[:, 0, 1] = np.conjugate(a0) * damp
        rate[:, 1, 0] = a0 * np.conjugate(damp)
        rate[:, 1, 1] = -dp
        return rho, rate
    exc0 = math.sqrt(max(0.0, (1.0 - abs(a0) ** 2) / 2.0))
    amp = np.atleast_1d(nu1(times, params, initial=exc0))
    damp = np.atleast_1d(amplitude_rate(times, params, initial=exc0))
    q = (np.conjugate(amp) * amp).real
    dq = 2.0 * (np.conjugate(amp) * damp).real
    rho = np.zeros((n, 3, 3), dtype=complex)
    rho[:, 0, 0] = rho[:, 1, 1] = rho[:, 0, 1] = rho[:, 1, 0] = q
    rho[:, 0, 2] = rho[:, 1, 2] = np.conjugate(a0) * amp
    rho[:, 2, 0] = rho[:, 2, 1] = a0 * np.conjugate(amp)
    rho[:, 2, 2] = 1.0 - 2.0 * q
    rate = np.zeros((n, 3, 3), dtype=complex)
    rate[:, 0, 0] = rate[:, 1, 1] = rate[:, 0, 1] = rate[:, 1, 0] = dq
    rate[:, 0, 2] = rate[:, 1, 2] = np.conjugate(a0) * damp
    rate[:, 2, 0] = rate[:, 2, 1] = a0 * np.conjugate(damp)
    rate[:, 2, 2] = -2.0 * dq
    return rho, rate


def _validate_states(rhos: np.ndarray) -> None:
    if np.abs(rhos - np.conjugate(np.transpose(rhos, (0, 2, 1)))).max() > 1e-14:
        raise FloatingPointError("reduced states lost Hermiticity")
    traces = np.trace(rhos, axis1=1, axis2=2)
    if np.abs(traces - 1.0).max() > 1e-12:
        raise FloatingPointError("reduced states lost unit trace")
    if np.linalg.eigvalsh(rhos).min() < -1e-12:
        raise FloatingPointError("reduced states lost positivity")


def density_matrix(t: float, params: ModelParams,
                   ground_amplitude: complex = 0.0) -> DensityMatrix:
    """Reduced state of one emitter at time t (shared ground amplitude a0)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    rho, _ = _density_ops(np.asarray([float(t)]), params, ground_amplitude)
    return DensityMatrix(rho[0]).validate()


def density_trajectory(params: ModelParams, tau: float, steps: int = 4096,
                       ground_amplitude: complex = 0.0):
    """Times, reduced states and analytic state rates on a uniform grid."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    times = np.linspace(0.0, float(tau), steps + 1)
    rhos, rates = _density_ops(times, params, ground_amplitude)
    _validate_states(rhos)
    return times, rhos, rates
