"""Core domain types and phase-plane primitives.

The equation under study is the 1D Klein-Gordon equation with logarithmic
nonlinearity,

    u_tt - u_xx + u - log(|u|^p) u = 0,

for complex u, integer power p >= 1 and unit interaction strength.  Standing
waves u(x,t) = exp(i c t) phi(x) with real positive profile phi solve the
planar ODE

    phi'' = h(c, phi) := (1 - c^2) phi - p log(phi) phi.

Conventions used throughout the package:

* The first integral of the profile ODE is written with the sign it carries
  in the phase-plane analysis, H(phi, xi) = -xi^2/2 + H_pot(phi), so that
  xi^2 = 2 (H_pot(phi) - B) on a level set H = B.  ``potential_well``
  returns H_pot.
* Profiles are sampled on uniform periodic grids with node 0 at the wave
  maximum; evenness phi(x) = phi(-x) then reads phi[j] = phi[n-j].
* z log|z|^p extends continuously by 0 at z = 0; every routine that touches
  the nonlinearity applies that extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "WaveParams",
    "Grid",
    "PhasePoint",
    "PeriodicProfile",
    "log_nonlinearity",
    "nonlinearity_lipschitz_bound",
    "potential_h",
    "potential_well",
    "hamiltonian",
    "equilibria",
    "fourier_wavenumbers",
    "spectral_derivative",
    "periodic_trapezoid",
    "resample_periodic",
]

# |z| below this is treated as exactly zero in z*log|z| (underflow guard only)
LOG_UNDERFLOW_FLOOR = 1e-300


@dataclass(frozen=True)
class WaveParams:
    """Parameters (p, c) of a standing wave; the interaction strength is
    fixed at 1."""

    p: int
    c: float
    mu: float = 1.0

    def __post_init__(self):
        if not float(self.p).is_integer() or self.p < 1:
            raise ValidationError(f"p must be a positive integer, got {self.p}")
        if self.mu != 1.0:
            raise ValidationError("interaction strength is fixed at 1")
        if not np.isfinite(self.c):
            raise ValidationError("c must be finite")

    @property
    def center_amplitude(self) -> float:
        """phi-coordinate of the phase-plane center, exp((1-c^2)/p)."""
        return float(np.exp((1.0 - self.c**2) / self.p))

    @property
    def homoclinic_amplitude(self) -> float:
        """Peak of the Gaussian solitary wave, exp(1/2 + (1-c^2)/p);
        periodic amplitudes live strictly below it."""
        return float(np.exp(0.5 + (1.0 - self.c**2) / self.p))

    @property
    def min_period(self) -> float:
        """Small-oscillation period 2*pi/sqrt(p); every periodic wave is
        longer."""
        return float(2.0 * np.pi / np.sqrt(self.p))


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid x_j = j*length/n, j = 0..n-1."""

    n: int
    length: float

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ValidationError(f"grid size must be even and >= 2, got {self.n}")
        if not (self.length > 0.0):
            raise ValidationError(f"grid length must be positive, got {self.length}")

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing


@dataclass(frozen=True)
class PhasePoint:
    """A point (phi, xi = phi') of the profile phase plane."""

    phi: float
    xi: float


@dataclass
class PeriodicProfile:
    """A positive even periodic standing-wave profile sampled on one period.

    Node 0 sits at the maximum, so phi[0] = amplitude and dphi[0] = 0; the
    period equals grid.length.
    """

    params: WaveParams
    grid: Grid
    phi: np.ndarray
    dphi: np.ndarray
    amplitude: float
    period: float = field(default=0.0)

    def __post_init__(self):
        if self.period == 0.0:
            self.period = self.grid.length

    @property
    def c(self) -> float:
        return self.params.c

    @property
    def p(self) -> int:
        return self.params.p

    def validate(self, tol: float = 1e-7) -> None:
        """Check the structural invariants, raising ValidationError on
        violation.  tol absorbs ODE-solver and resampling error."""
        n = self.grid.n
        if len(self.phi) != n or len(self.dphi) != n:
            raise ValidationError("profile arrays do not match the grid")
        if abs(self.period - self.grid.length) > tol * self.period:
            raise ValidationError("period does not match grid length")
        if np.min(self.phi) <= 0.0:
            raise ValidationError("profile is not strictly positive")
        scale = self.amplitude
        even_gap = np.max(np.abs(self.phi - self.phi[(-np.arange(n)) % n]))
        if even_gap > tol * scale:
            raise ValidationError(f"profile not even about node 0 (gap {even_gap:.2e})")
        if abs(self.dphi[0]) > tol * scale:
            raise ValidationError("dphi[0] != 0")
        if abs(np.max(self.phi) - self.amplitude) > tol * scale:
            raise ValidationError("max(phi) != amplitude")
        if not self.period > self.params.min_period:
            raise ValidationError("period at or below the small-oscillation limit")


def log_nonlinearity(z, p: int):
    """z * log(|z|^p), extended continuously by 0 at z = 0.

    Accepts scalars or arrays, real or complex; total on its domain.
    """
    z = np.asarray(z)
    az = np.abs(z)
    safe = np.where(az > LOG_UNDERFLOW_FLOOR, az, 1.0)
    out = np.where(az > LOG_UNDERFLOW_FLOOR, p * z * np.log(safe), 0.0 * z)
    return out if out.ndim else out[()]


def nonlinearity_lipschitz_bound(a: complex, b: complex) -> float:
    """Log-Lipschitz majorant (1 + |log|b||) * |a - b| for the scalar map
    z -> z log|z|, valid when |a| <= |b| and b != 0.

    Used as a test oracle: |a log|a| - b log|b|| never exceeds the bound.
    """
    aa, ab = abs(a), abs(b)
    if ab == 0.0:
        raise ValidationError("bound requires b != 0")
    if aa > ab:
        raise ValidationError("bound requires |a| <= |b|")
    return float((1.0 + abs(np.log(ab))) * abs(a - b))


def potential_h(params: WaveParams, phi: float) -> float:
    """Right-hand side of the profile ODE, h(c, phi) = (1-c^2) phi - p log(phi) phi.

    Requires phi > 0.  Vanishes at the center amplitude exp((1-c^2)/p).
    """
    phi = np.asarray(phi, dtype=float)
    if np.any(phi <= 0.0):
        raise ValidationError("potential_h requires phi > 0")
    out = (1.0 - params.c**2) * phi - params.p * np.log(phi) * phi
    return out if out.ndim else float(out)


def potential_well(params: WaveParams, phi) -> float:
    """H_pot(phi) = ((1-c^2)/2 + p/4) phi^2 - (p/2) log(phi) phi^2, the
    xi = 0 restriction of the first integral.  Requires phi > 0."""
    phi = np.asarray(phi, dtype=float)
    if np.any(phi <= 0.0):
        raise ValidationError("potential_well requires phi > 0")
    alpha = (1.0 - params.c**2) / 2.0 + params.p / 4.0
    out = alpha * phi**2 - 0.5 * params.p * np.log(phi) * phi**2
    return out if out.ndim else float(out)


def hamiltonian(params: WaveParams, pt: PhasePoint) -> float:
    """First integral H(phi, xi) = -xi^2/2 + H_pot(phi) of the profile ODE,
    written with the sign convention of the phase-plane analysis (it is a
    conserved level function, not a positive energy).  Requires pt.phi > 0."""
    if pt.phi <= 0.0:
        raise ValidationError("hamiltonian requires phi > 0")
    return float(-0.5 * pt.xi**2 + potential_well(params, pt.phi))


def equilibria(params: WaveParams) -> tuple[PhasePoint, PhasePoint, float]:
    """Saddle, center, and homoclinic amplitude of the profile phase plane.

    The saddle sits at the origin, the center at (exp((1-c^2)/p), 0); the
    homoclinic loop through the saddle peaks at exp(1/2 + (1-c^2)/p).
    """
    saddle = PhasePoint(0.0, 0.0)
    center = PhasePoint(params.center_amplitude, 0.0)
    return saddle, center, params.homoclinic_amplitude


# ---------------------------------------------------------------------------
# periodic grid operations shared by the spectral and evolution modules
# ---------------------------------------------------------------------------

def fourier_wavenumbers(grid: Grid) -> np.ndarray:
    """Signed angular wavenumbers 2*pi*k/L in FFT ordering."""
    return 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.spacing)


def spectral_derivative(values: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Differentiate a periodic sample by Fourier multiplication.

    Real input returns real output.
    """
    k = fourier_wavenumbers(grid)
    out = np.fft.ifft((1j * k) ** order * np.fft.fft(values))
    return np.real(out) if np.isrealobj(values) else out


def periodic_trapezoid(values: np.ndarray, grid: Grid) -> float:
    """Integral over one period; on a uniform periodic grid the trapezoid
    rule collapses to spacing * sum and is spectrally accurate."""
    return float(np.real(np.sum(values)) * grid.spacing)


def resample_periodic(values: np.ndarray, m: int) -> np.ndarray:
    """Trigonometric resampling of a periodic sample onto m uniform points.

    Upsampling zero-pads the spectrum; downsampling truncates it.  m must be
    even.
    """
    if m % 2 != 0:
        raise ValidationError("resampling target must be even")
    n = len(values)
    if m == n:
        return values.copy()
    spec = np.fft.fft(values) / n
    out_spec = np.zeros(m, dtype=complex)
    keep = min(n, m) // 2
    out_spec[:keep] = spec[:keep]
    out_spec[m - keep:] = spec[n - keep:]
    if m < n:
        # fold the +Nyquist partner lost by truncation onto -Nyquist
        out_spec[m - keep] += spec[keep]
    out = np.fft.ifft(out_spec) * m
    return np.real(out) if np.isrealobj(values) else out
