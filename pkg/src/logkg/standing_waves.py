"""Construction of periodic standing-wave profiles.

Profiles are built two independent ways, which the tests hold against each
other:

* ``shoot_wave`` integrates the planar ODE from a turning point and detects
  the opposite turning point by event root-finding (adaptive RK of order 8,
  dense output, relative/absolute tolerances 1e-12/1e-14);
* ``period_by_quadrature`` evaluates the level-set period integral
  L = 2 * int dphi / sqrt(2 (H_pot(phi) - B)) after the substitution
  phi = mid + half*sin(s), which removes the inverse-square-root endpoint
  singularities.

The quadrature evaluates H_pot(phi) - B as an expansion around the turning
point nearest each node (never as a raw difference of two O(1) quantities):
near the turning points the raw difference cancels catastrophically once
orbits get narrow, while the expansion keeps ~1e-10 relative accuracy over
the whole admissible amplitude window.

Amplitudes are admissible strictly inside (r2, hom) where r2 is the center
amplitude and hom the homoclinic peak; a relative margin of 1e-6 is enforced
at both ends because event detection degenerates at the center (zero-width
orbit) and at the homoclinic loop (infinite period).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    AmplitudeOutOfRange,
    DomainTooSmall,
    IntegrationFailure,
    NoConvergence,
    PeriodOutOfRange,
    RootBracketFailure,
    ValidationError,
)
from .model import Grid, PeriodicProfile, WaveParams

__all__ = [
    "ShotResult",
    "Branch",
    "AMPLITUDE_MARGIN",
    "shoot_wave",
    "period_by_quadrature",
    "amplitude_for_period",
    "continue_branch",
    "gaussian_solitary",
]

# relative guard keeping amplitudes away from the center and homoclinic limits
AMPLITUDE_MARGIN = 1e-6

_ODE_RTOL = 1e-12
_ODE_ATOL = 1e-14
_QUAD_ORDER = 48
_QUAD_RTOL = 1e-11
_MAX_PANELS = 64


@dataclass
class ShotResult:
    """Output of one shooting solve: the resampled profile, the half period,
    the lower turning amplitude and the level value B of the orbit."""

    profile: PeriodicProfile
    half_period: float
    turning_min: float
    hamiltonian_level: float


@dataclass
class Branch:
    """A fixed-period family of profiles ordered by frequency c."""

    params_list: list[WaveParams]
    profiles: list[PeriodicProfile]
    amplitudes: list[float]

    @property
    def period(self) -> float:
        return self.profiles[0].period

    def __len__(self) -> int:
        return len(self.profiles)

    def index_of(self, c: float) -> int:
        cs = np.array([q.c for q in self.params_list])
        return int(np.argmin(np.abs(cs - c)))


def _check_amplitude(params: WaveParams, amplitude: float) -> None:
    lo = params.center_amplitude * (1.0 + AMPLITUDE_MARGIN)
    hi = params.homoclinic_amplitude * (1.0 - AMPLITUDE_MARGIN)
    if not (lo <= amplitude <= hi):
        raise AmplitudeOutOfRange(
            f"amplitude {amplitude} outside [{lo}, {hi}] for p={params.p}, c={params.c}"
        )


def _rhs(x, y, p, c):
    phi, xi = y
    return (xi, (1.0 - c * c) * phi - p * np.log(phi) * phi)


def shoot_wave(params: WaveParams, amplitude: float, n: int = 256) -> ShotResult:
    """Integrate the profile ODE from (amplitude, 0) to the next turning
    point, double the event time for the period, and resample the closed
    orbit onto a uniform n-point grid by dense-output interpolation."""
    _check_amplitude(params, amplitude)
    p, c = params.p, params.c

    def turning(x, y, p, c):
        return y[1]

    turning.terminal = True
    turning.direction = 1.0  # xi rises through zero only at the minimum

    horizon = 100.0 * params.min_period
    sol = solve_ivp(
        _rhs, (0.0, horizon), [amplitude, 0.0], args=(p, c), method="DOP853",
        rtol=_ODE_RTOL, atol=_ODE_ATOL, events=turning, dense_output=True,
    )
    if sol.status != 1 or len(sol.t_events[0]) == 0:
        raise IntegrationFailure(
            f"no turning point within horizon {horizon} (p={p}, c={c}, a={amplitude})"
        )
    half = float(sol.t_events[0][0])
    turning_min = float(sol.y_events[0][0][0])
    period = 2.0 * half

    full = solve_ivp(
        _rhs, (0.0, period), [amplitude, 0.0], args=(p, c), method="DOP853",
        rtol=_ODE_RTOL, atol=_ODE_ATOL, dense_output=True,
    )
    grid = Grid(n, period)
    samples = full.sol(grid.nodes)
    profile = PeriodicProfile(
        params=params, grid=grid, phi=samples[0], dphi=samples[1],
        amplitude=amplitude, period=period,
    )
    profile.validate()
    level = float(_well(params, amplitude))
    return ShotResult(profile, half, turning_min, level)


def _well(params: WaveParams, phi):
    alpha = (1.0 - params.c**2) / 2.0 + params.p / 4.0
    return alpha * phi**2 - 0.5 * params.p * np.log(phi) * phi**2


def _well_gap(params: WaveParams, anchor, delta):
    """H_pot(anchor + delta) - H_pot(anchor) without catastrophic
    cancellation for small |delta|."""
    p = params.p
    alpha = (1.0 - params.c**2) / 2.0 + p / 4.0
    phi = anchor + delta
    return (
        delta * (phi + anchor) * (alpha - 0.5 * p * np.log(phi))
        - 0.5 * p * anchor * anchor * np.log1p(delta / anchor)
    )


def _lower_turning(params: WaveParams, amplitude: float) -> float:
    """Second positive root of H_pot(phi) = H_pot(amplitude), below the
    center amplitude."""
    r2 = params.center_amplitude
    lo = 0.5 * r2
    for _ in range(200):
        if _well_gap(params, amplitude, lo - amplitude) <= 0.0:
            break
        lo *= 0.5
    else:
        raise RootBracketFailure("could not bracket the lower turning point")
    try:
        return float(
            brentq(
                lambda f: _well_gap(params, amplitude, f - amplitude),
                lo, r2, xtol=1e-15, rtol=8.9e-16,
            )
        )
    except ValueError as exc:
        raise RootBracketFailure(str(exc)) from exc


def period_by_quadrature(params: WaveParams, amplitude: float) -> float:
    """Period of the orbit through (amplitude, 0) by desingularized
    Gauss-Legendre quadrature of the level-set integral.

    Panels double until consecutive refinements agree to 1e-11 relative; if
    refinement stops improving (the rounding floor of the narrow-orbit
    regime) the previous, more accurate value is returned.
    """
    _check_amplitude(params, amplitude)
    phim = _lower_turning(params, amplitude)
    half = 0.5 * (amplitude - phim)
    resid = _well_gap(params, amplitude, phim - amplitude)  # ~0 root residual
    nodes, weights = np.polynomial.legendre.leggauss(_QUAD_ORDER)

    prev = None
    prev_diff = np.inf
    npan = 1
    while npan <= _MAX_PANELS:
        edges = np.linspace(-np.pi / 2.0, np.pi / 2.0, npan + 1)
        total = 0.0
        for i in range(npan):
            mid_s = 0.5 * (edges[i] + edges[i + 1])
            half_s = 0.5 * (edges[i + 1] - edges[i])
            s = mid_s + half_s * nodes
            sins, coss = np.sin(s), np.cos(s)
            gap = np.where(
                s >= 0.0,
                _well_gap(params, amplitude, -half * coss**2 / (1.0 + sins)),
                _well_gap(params, phim, half * (1.0 + sins)) + resid,
            )
            total += half_s * np.sum(weights * half * coss / np.sqrt(2.0 * gap))
        value = 2.0 * total
        if not np.isfinite(value):
            raise RootBracketFailure("quadrature produced a non-finite period")
        if prev is not None:
            diff = abs(value - prev)
            if diff <= _QUAD_RTOL * abs(value):
                return value
            if diff >= prev_diff:
                return prev  # refinement hit the rounding floor
            prev_diff = diff
        prev = value
        npan *= 2
    return prev


def amplitude_for_period(
    params: WaveParams, target_period: float, near: float | None = None
) -> float:
    """Invert amplitude -> period by bracketed root-finding over the
    admissible window (the period is monotone increasing in amplitude,
    asserted empirically in the test suite).

    ``near`` seeds the bracket with a known close-by amplitude (warm start
    for branch continuation); the full window is the fallback.
    """
    if not target_period > params.min_period:
        raise PeriodOutOfRange(
            f"period {target_period} not above the limit {params.min_period}"
        )
    lo = params.center_amplitude * (1.0 + AMPLITUDE_MARGIN)
    hi = params.homoclinic_amplitude * (1.0 - AMPLITUDE_MARGIN)

    def objective(a: float) -> float:
        return period_by_quadrature(params, a) - target_period

    if near is not None and lo < near < hi:
        width = 0.02 * (hi - lo)
        blo, bhi = max(lo, near - width), min(hi, near + width)
        if objective(blo) <= 0.0 <= objective(bhi):
            return float(brentq(objective, blo, bhi, xtol=1e-14, rtol=8.9e-16))

    if objective(lo) > 0.0 or objective(hi) < 0.0:
        raise NoConvergence(
            f"target period {target_period} not bracketed by the amplitude window"
        )
    try:
        return float(brentq(objective, lo, hi, xtol=1e-14, rtol=8.9e-16))
    except ValueError as exc:
        raise NoConvergence(str(exc)) from exc


def continue_branch(
    p: int,
    c_center: float,
    period: float,
    c_span: float,
    steps: int,
    n: int = 256,
) -> Branch:
    """Fixed-period continuation c -> phi_c over [c_center - c_span,
    c_center + c_span], solving the amplitude at each step and shooting the
    profile.  Steps run in increasing c (natural-parameter continuation)."""
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    cs = [c_center] if c_span == 0.0 or steps == 1 else list(
        np.linspace(c_center - c_span, c_center + c_span, steps)
    )
    params_list: list[WaveParams] = []
    profiles: list[PeriodicProfile] = []
    amplitudes: list[float] = []
    previous: float | None = None
    for c in cs:
        params = WaveParams(p, float(c))
        try:
            amp = amplitude_for_period(params, period, near=previous)
            shot = shoot_wave(params, amp, n)
        except Exception as exc:
            raise type(exc)(f"branch point c={c}: {exc}") from exc
        params_list.append(params)
        profiles.append(shot.profile)
        amplitudes.append(amp)
        previous = amp
    return Branch(params_list, profiles, amplitudes)


def gaussian_solitary(params: WaveParams, grid: Grid) -> PeriodicProfile:
    """Sample the exact Gaussian solitary wave
    exp(1/2 + (1-c^2)/p) * exp(-p x^2 / 4) with its maximum at node 0.

    Only approximately periodic: the tail at +-L/2 must already be below
    1e-12, otherwise DomainTooSmall is raised.
    """
    peak = params.homoclinic_amplitude
    tail = peak * np.exp(-params.p * grid.length**2 / 16.0)
    if tail > 1e-12:
        raise DomainTooSmall(
            f"length {grid.length} leaves a solitary tail of {tail:.2e} > 1e-12"
        )
    x = grid.nodes
    xc = np.where(x > grid.length / 2.0, x - grid.length, x)  # center at node 0
    phi = peak * np.exp(-params.p * xc**2 / 4.0)
    dphi = -0.5 * params.p * xc * phi
    profile = PeriodicProfile(
        params=params, grid=grid, phi=phi, dphi=dphi,
        amplitude=peak, period=grid.length,
    )
    return profile
