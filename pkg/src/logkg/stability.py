"""Convexity of the action along fixed-period branches and the stability
verdict.

Along a fixed-period family c -> phi_c the scalar d(c) (conserved energy
minus c times the momentum, evaluated on the wave) has second derivative

    d''(c) = (4 c^2 / p - 1) * int_0^L phi_c^2 dx,

so its sign flips exactly at |c| = sqrt(p)/2.  The closed form is checked
against two independent routes: the defining formula
d'' = -||phi||^2 - c d/dc ||phi||^2 by centered finite differences along a
branch, and the inner product of the deflated block solve with its
right-hand side, which equals -d''(c).

Verdicts: Stable requires p in {1,2,3}, sqrt(p)/2 < |c| < 1, d'' > 0 and the
spectral certificates (kappa > 0, beta > 0, block indices (1,1)/(0,1));
UnstableEven covers |c| < sqrt(p)/2 for those p (instability within the even
subspace); everything else, including the sign-change boundary itself, is
OutsideTheory.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BranchTooShort
from .model import PeriodicProfile, WaveParams, periodic_trapezoid
from .standing_waves import Branch, continue_branch, shoot_wave, amplitude_for_period
from . import spectral

__all__ = [
    "Verdict",
    "SpectralSummary",
    "StabilityReport",
    "d_second_derivative",
    "d_second_derivative_fd",
    "classify",
    "spectral_summary",
    "stability_report",
    "FD_BRANCH_STEP",
]

# centered stencil step in c for the finite-difference route, Richardson pair
FD_BRANCH_STEP = 1e-3


class Verdict(str, Enum):
    STABLE = "Stable"
    UNSTABLE_EVEN = "UnstableEven"
    OUTSIDE_THEORY = "OutsideTheory"


@dataclass
class SpectralSummary:
    """The spectral certificates feeding the verdict."""

    lambda0: float
    beta: float
    gamma: float
    kappa: float
    index_re: tuple[int, int]
    index_im: tuple[int, int]


@dataclass
class StabilityReport:
    params: WaveParams
    period: float
    l2_norm_sq: float
    d2: float
    d2_fd: float
    lambda0: float
    beta: float
    gamma_min: float
    kappa: float
    verdict: Verdict


def d_second_derivative(profile: PeriodicProfile) -> float:
    """Closed form (4c^2/p - 1) * ||phi_c||^2 with spectrally accurate
    periodic quadrature."""
    l2 = periodic_trapezoid(profile.phi**2, profile.grid)
    return (4.0 * profile.c**2 / profile.p - 1.0) * l2


def _l2_by_c(branch: Branch) -> tuple[np.ndarray, np.ndarray]:
    cs = np.array([q.c for q in branch.params_list])
    l2s = np.array(
        [periodic_trapezoid(pr.phi**2, pr.grid) for pr in branch.profiles]
    )
    return cs, l2s


def d_second_derivative_fd(branch: Branch) -> float:
    """Finite-difference route -||phi||^2 - c * d/dc ||phi||^2 at the branch
    center.

    A 5-point symmetric branch yields the Richardson-extrapolated centered
    derivative; a 3-point branch the plain centered one.
    """
    if len(branch) < 3 or len(branch) % 2 == 0:
        raise BranchTooShort("need an odd branch of >= 3 points centered at the target c")
    cs, l2s = _l2_by_c(branch)
    mid = len(branch) // 2
    hstep = cs[mid + 1] - cs[mid]
    deriv = (l2s[mid + 1] - l2s[mid - 1]) / (2.0 * hstep)
    if len(branch) >= 5:
        deriv_2h = (l2s[mid + 2] - l2s[mid - 2]) / (4.0 * hstep)
        deriv = (4.0 * deriv - deriv_2h) / 3.0
    return float(-l2s[mid] - cs[mid] * deriv)


def classify(profile: PeriodicProfile, summary: SpectralSummary) -> StabilityReport:
    """Assemble the report and apply the verdict rules.

    The closed-form d'' is used for the verdict; the finite-difference entry
    is populated by ``stability_report`` (NaN here, since no branch is
    available).
    """
    return _classify(profile, summary, d2_fd=np.nan)


def _classify(
    profile: PeriodicProfile, summary: SpectralSummary, d2_fd: float
) -> StabilityReport:
    params = profile.params
    p, c = params.p, params.c
    l2 = periodic_trapezoid(profile.phi**2, profile.grid)
    d2 = (4.0 * c**2 / p - 1.0) * l2

    threshold = np.sqrt(p) / 2.0
    if p not in (1, 2, 3) or abs(c) >= 1.0:
        verdict = Verdict.OUTSIDE_THEORY
    elif abs(c) < threshold:
        verdict = Verdict.UNSTABLE_EVEN
    elif abs(c) == threshold:
        verdict = Verdict.OUTSIDE_THEORY  # the criterion is silent on the boundary
    else:
        certified = (
            d2 > 0.0
            and summary.kappa > 0.0
            and summary.beta > 0.0
            and summary.index_re == (1, 1)
            and summary.index_im == (0, 1)
        )
        verdict = Verdict.STABLE if certified else Verdict.OUTSIDE_THEORY

    return StabilityReport(
        params=params,
        period=profile.period,
        l2_norm_sq=l2,
        d2=d2,
        d2_fd=d2_fd,
        lambda0=summary.lambda0,
        beta=summary.beta,
        gamma_min=summary.gamma,
        kappa=summary.kappa,
        verdict=verdict,
    )


def _block_index(
    kind: spectral.MatrixKind, profile: PeriodicProfile, modes: int | None, tol: float
) -> tuple[int, int]:
    vals = spectral.matrix_operator_eigenvalues(
        spectral.MatrixOperator(kind, profile), m=6, modes=modes
    )
    n_neg = int(np.sum(vals < -tol))
    n_zero = int(np.sum(np.abs(vals) < tol))
    return n_neg, n_zero


def spectral_summary(
    profile: PeriodicProfile,
    modes: int | None = None,
    zero_tolerance: float = spectral.DEFAULT_ZERO_TOL,
) -> SpectralSummary:
    """Compute all spectral certificates for one profile."""
    lam0, _ = spectral.lambda0_closed_form(profile.p, profile.c)
    return SpectralSummary(
        lambda0=lam0,
        beta=spectral.beta_minimum(profile, modes),
        gamma=spectral.gamma_minimum(profile, modes),
        kappa=spectral.kappa_minimum(profile, modes),
        index_re=_block_index(spectral.MatrixKind.RE, profile, modes, zero_tolerance),
        index_im=_block_index(spectral.MatrixKind.IM, profile, modes, zero_tolerance),
    )


def stability_report(
    params: WaveParams,
    period: float,
    n: int = 256,
    modes: int | None = None,
    fd_step: float = FD_BRANCH_STEP,
) -> StabilityReport:
    """Full pipeline: solve the wave at the requested fixed period, compute
    the spectral certificates, and cross-check d'' by branch differentiation."""
    amplitude = amplitude_for_period(params, period)
    profile = shoot_wave(params, amplitude, n).profile
    summary = spectral_summary(profile, modes)
    branch = continue_branch(params.p, params.c, period, 2.0 * fd_step, 5, n)
    d2_fd = d_second_derivative_fd(branch)
    return _classify(profile, summary, d2_fd)
