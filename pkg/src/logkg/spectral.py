"""Hill operators, Floquet constant, and constrained quadratic-form minima.

Linearizing the flow about a standing wave exp(i c t) phi(x) produces two
2x2 matrix operators acting on (real, imaginary)-part pairs,

    B_re = [[-d2 + 1 - log(phi^p) - p, -c], [-c, 1]],
    B_im = [[-d2 + 1 - log(phi^p),      c], [ c, 1]],

whose non-positive spectra reduce, through the rational map
gamma(lam) = lam (1 - c^2/(lam - 1)), to those of the scalar Hill operators

    H_re = -d2 + (1 - c^2) - p - log(phi^p)    (kernel contains phi'),
    H_im = -d2 + (1 - c^2) - log(phi^p)        (ground state phi).

Discretization is Fourier collocation on the profile grid: -d2 becomes a
real symmetric circulant (exact on the trigonometric space of the grid), the
potential a diagonal, so every operator here is a dense real symmetric
matrix handed to LAPACK.

Simplicity of the zero eigenvalue of H_re is certified independently of any
eigensolve by the Floquet constant theta: with q = phi' the second solution
ybar of H_re y = 0 normalized by ybar(0) = -1/phi''(0), ybar'(0) = 0
satisfies ybar(x + L) = ybar(x) + theta q(x), and zero is simple iff
theta != 0 (lowest eigenvalue below zero iff theta < 0).  Differentiating
that relation at x = 0, where q(0) = 0 and q'(0) = phi''(0), gives
theta = ybar'(L)/phi''(0); the quotient ybar(L)/phi''(0) is reported
alongside for comparison, but only the derivative form is consistent with
ybar(L) = ybar(0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import (
    AmbiguousZero,
    ConstraintDegenerate,
    ConvergenceFailure,
    DegenerateTurningPoint,
    InertialIndexMismatch,
    PoleAtOne,
    SingularSystem,
    ValidationError,
)
from .model import Grid, PeriodicProfile, potential_h, resample_periodic
from scipy.integrate import solve_ivp

__all__ = [
    "HillOperator",
    "HillReport",
    "ThetaRow",
    "MatrixKind",
    "MatrixOperator",
    "hill_re",
    "hill_im",
    "hill_matrix",
    "hill_eigenvalues",
    "floquet_theta",
    "inertial_index",
    "eigenvalue_map_gamma",
    "lambda0_closed_form",
    "block_matrix",
    "matrix_operator_eigenvalues",
    "constrained_minimum",
    "beta_minimum",
    "gamma_minimum",
    "kappa_minimum",
    "solve_mn",
    "hill_report",
]

DEFAULT_ZERO_TOL = 1e-6


@dataclass
class HillOperator:
    """Scalar Hill operator -d2 + shift - p*log(phi) on the profile grid."""

    profile: PeriodicProfile
    shift: float
    potential: np.ndarray
    kind: str = "custom"

    @property
    def grid(self) -> Grid:
        return self.profile.grid


def hill_re(profile: PeriodicProfile) -> HillOperator:
    """Hill reduction of the real-part block: shift (1 - c^2) - p."""
    shift = (1.0 - profile.c**2) - profile.p
    return HillOperator(profile, shift, shift - profile.p * np.log(profile.phi), "re")


def hill_im(profile: PeriodicProfile) -> HillOperator:
    """Hill reduction of the imaginary-part block: shift (1 - c^2)."""
    shift = 1.0 - profile.c**2
    return HillOperator(profile, shift, shift - profile.p * np.log(profile.phi), "im")


@dataclass
class ThetaRow:
    """The monitored quantities of one Floquet run, mirroring the reference
    table columns: phi(0), phi''(0), ybar(0), period, ybar(L), ybar'(L)."""

    phi0: float
    ddphi0: float
    ybar0: float
    period: float
    ybarL: float
    dybarL: float


@dataclass
class HillReport:
    """Eigenvalue and Floquet summary of a Hill operator."""

    eigenvalues: np.ndarray | None = None
    n_negative: int = -1
    n_zero: int = -1
    theta: float = np.nan
    theta_from_value: float = np.nan  # ybar(L)/phi''(0), reported for contrast
    theta_table_row: ThetaRow | None = None
    zero_tolerance: float = DEFAULT_ZERO_TOL


class MatrixKind(str, Enum):
    RE = "re"
    IM = "im"


@dataclass
class MatrixOperator:
    """One of the two 2x2 matrix operators of the linearization."""

    kind: MatrixKind
    profile: PeriodicProfile
    c: float = field(default=np.nan)

    def __post_init__(self):
        if np.isnan(self.c):
            self.c = self.profile.c


def _second_derivative_circulant(n: int, length: float) -> np.ndarray:
    """Dense symmetric Fourier-collocation matrix of -d2... actually of d2;
    callers negate."""
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=length / n)
    col = np.real(np.fft.ifft(-(k**2)))
    return scipy.linalg.circulant(col)


def _resampled_potential(op: HillOperator, modes: int) -> tuple[np.ndarray, float]:
    if modes == op.grid.n:
        return op.potential, op.grid.length
    phi = resample_periodic(op.profile.phi, modes)
    return op.shift - op.profile.p * np.log(phi), op.grid.length


def hill_matrix(op: HillOperator, modes: int | None = None) -> np.ndarray:
    """Dense symmetric collocation matrix of the Hill operator."""
    modes = op.grid.n if modes is None else modes
    q, length = _resampled_potential(op, modes)
    return -_second_derivative_circulant(modes, length) + np.diag(q)


def hill_eigenvalues(op: HillOperator, m: int, modes: int | None = None) -> np.ndarray:
    """The m smallest eigenvalues, sorted ascending."""
    modes = op.grid.n if modes is None else modes
    if modes < 8 * m:
        raise ValidationError(f"modes={modes} < 8*m={8 * m}")
    try:
        vals = scipy.linalg.eigh(hill_matrix(op, modes), eigvals_only=True)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailure(str(exc)) from exc
    return vals[:m]


def floquet_theta(profile: PeriodicProfile) -> HillReport:
    """Floquet constant of the real-part Hill operator along the wave.

    Integrates the profile and ybar jointly over one period, evaluating
    phi(x) by the ODE flow rather than grid interpolation, with the same
    tolerances as the shooting solver.
    """
    params = profile.params
    p, c = params.p, params.c
    a = profile.amplitude
    ddphi0 = potential_h(params, a)
    if abs(ddphi0) < 1e-10:
        raise DegenerateTurningPoint(f"phi''(0) = {ddphi0:.3e} too close to zero")
    ybar0 = -1.0 / ddphi0

    def joint(x, y, p, c):
        phi, dphi, yb, dyb = y
        pot = (1.0 - c * c) - p - p * np.log(phi)
        return (dphi, (1.0 - c * c) * phi - p * np.log(phi) * phi, dyb, pot * yb)

    period = profile.period
    sol = solve_ivp(
        joint, (0.0, period), [a, 0.0, ybar0, 0.0], args=(p, c),
        method="DOP853", rtol=1e-12, atol=1e-14,
    )
    if not sol.success:  # pragma: no cover
        raise ConvergenceFailure(sol.message)
    ybarL, dybarL = float(sol.y[2, -1]), float(sol.y[3, -1])
    report = HillReport(
        theta=dybarL / ddphi0,
        theta_from_value=ybarL / ddphi0,
        theta_table_row=ThetaRow(a, ddphi0, ybar0, period, ybarL, dybarL),
    )
    return report


def inertial_index(
    op: HillOperator,
    zero_tolerance: float = DEFAULT_ZERO_TOL,
    m: int = 8,
    modes: int | None = None,
    check_floquet: bool = True,
) -> tuple[int, int]:
    """Inertial index (negative count, zero count) of the Hill operator.

    Eigenvalues below -zero_tolerance count as negative, within the
    tolerance as zero; any eigenvalue landing in the guard band
    [zero_tolerance, 2*zero_tolerance) in magnitude raises AmbiguousZero.
    For the real-part operator the result is cross-checked against the
    Floquet prediction (theta < 0 forces index (1,1)).
    """
    vals = hill_eigenvalues(op, m, modes)
    mags = np.abs(vals)
    if np.any((mags >= zero_tolerance) & (mags < 2.0 * zero_tolerance)):
        raise AmbiguousZero(
            f"eigenvalue in the guard band around {zero_tolerance}: {vals}"
        )
    n_neg = int(np.sum(vals < -zero_tolerance))
    n_zero = int(np.sum(mags < zero_tolerance))
    if check_floquet and op.kind == "re":
        theta = floquet_theta(op.profile).theta
        if theta < 0.0 and (n_neg, n_zero) != (1, 1):
            raise InertialIndexMismatch(
                f"theta={theta:.4f} < 0 predicts (1,1) but computed ({n_neg},{n_zero})"
            )
    return n_neg, n_zero


def eigenvalue_map_gamma(lam: float, c: float) -> float:
    """Rational map lam -> lam*(1 - c^2/(lam - 1)) carrying non-positive
    eigenvalues of the real-part block onto those of its Hill reduction."""
    if lam == 1.0:
        raise PoleAtOne("eigenvalue map has a pole at lambda = 1")
    return float(lam * (1.0 - c * c / (lam - 1.0)))


def lambda0_closed_form(p: int, c: float) -> tuple[float, float]:
    """Closed-form unique negative eigenvalue of the real-part block,

        lam0 = (1 + c^2 - p - sqrt(1 + 2c^2 + 2p + c^4 - 2c^2 p + p^2)) / 2,

    with the companion component ratio m = -c/(lam0 - 1) of its eigenvector
    (phi, m*phi)."""
    rad = 1.0 + 2.0 * c * c + 2.0 * p + c**4 - 2.0 * c * c * p + p * p
    lam0 = 0.5 * (1.0 + c * c - p - np.sqrt(rad))
    return float(lam0), float(-c / (lam0 - 1.0))


def block_matrix(op: MatrixOperator, modes: int | None = None) -> np.ndarray:
    """Dense symmetric 2N x 2N collocation matrix [[A, s*cI], [s*cI, I]]
    with s = -1 for the Re kind and +1 for the Im kind."""
    profile, c = op.profile, op.c
    n = profile.grid.n if modes is None else modes
    phi = profile.phi if n == profile.grid.n else resample_periodic(profile.phi, n)
    scalar = 1.0 - profile.p * np.log(phi)
    if op.kind == MatrixKind.RE:
        scalar = scalar - profile.p
        coupling = -c
    else:
        coupling = c
    A = -_second_derivative_circulant(n, profile.grid.length) + np.diag(scalar)
    eye = np.eye(n)
    return np.block([[A, coupling * eye], [coupling * eye, eye]])


def matrix_operator_eigenvalues(
    op: MatrixOperator, m: int, modes: int | None = None
) -> np.ndarray:
    """The m smallest eigenvalues of the block operator, sorted ascending."""
    n = op.profile.grid.n if modes is None else modes
    if n < 8 * m:
        raise ValidationError(f"modes={n} < 8*m={8 * m}")
    try:
        vals = scipy.linalg.eigh(block_matrix(op, modes), eigvals_only=True)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailure(str(exc)) from exc
    return vals[:m]


def _stack(top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
    return np.concatenate([np.asarray(top, dtype=float), np.asarray(bottom, dtype=float)])


def constrained_minimum(
    op: MatrixOperator,
    constraints: list[np.ndarray],
    modes: int | None = None,
) -> float:
    """Minimum of <Mv, v> over unit vectors v orthogonal (discrete L2) to
    the given stacked constraint vectors.

    The operator is projected onto the constraint-orthogonal subspace via an
    SVD null-space basis and the smallest eigenvalue of the projection is
    returned.  One or two constraints are supported.
    """
    if not 1 <= len(constraints) <= 2:
        raise ValidationError("expected 1 or 2 constraint vectors")
    M = block_matrix(op, modes)
    C = np.array([np.asarray(v, dtype=float) for v in constraints])
    if C.shape[1] != M.shape[0]:
        raise ValidationError("constraint length does not match the discretization")
    norms = np.linalg.norm(C, axis=1)
    if np.any(norms == 0.0):
        raise ConstraintDegenerate("zero constraint vector")
    if len(C) == 2:
        cosine = abs(C[0] @ C[1]) / (norms[0] * norms[1])
        if cosine > 1.0 - 1e-10:
            raise ConstraintDegenerate(f"constraints collinear (cos={cosine})")
    Z = scipy.linalg.null_space(C)
    vals = scipy.linalg.eigh(Z.T @ M @ Z, eigvals_only=True)
    return float(vals[0])


def _im_constraint(profile: PeriodicProfile) -> np.ndarray:
    p, c, phi = profile.p, profile.c, profile.phi
    return _stack(p * phi * np.log(phi), -c * phi)


def _re_constraint(profile: PeriodicProfile) -> np.ndarray:
    return _stack(profile.c * profile.phi, profile.phi)


def _re_translation_constraint(profile: PeriodicProfile) -> np.ndarray:
    p, c, dphi, phi = profile.p, profile.c, profile.dphi, profile.phi
    return _stack(p * np.log(phi) * dphi + p * dphi, c * dphi)


def beta_minimum(profile: PeriodicProfile, modes: int | None = None) -> float:
    """Minimum of the Im form orthogonal to (phi log(phi^p), -c phi);
    strictly positive on admissible waves."""
    op = MatrixOperator(MatrixKind.IM, profile)
    return constrained_minimum(op, [_im_constraint(profile)], modes)


def gamma_minimum(profile: PeriodicProfile, modes: int | None = None) -> float:
    """Minimum of the Re form orthogonal to (c phi, phi); zero on admissible
    waves (attained along the translation kernel)."""
    op = MatrixOperator(MatrixKind.RE, profile)
    return constrained_minimum(op, [_re_constraint(profile)], modes)


def kappa_minimum(profile: PeriodicProfile, modes: int | None = None) -> float:
    """Minimum of the Re form orthogonal to both (c phi, phi) and the
    translation direction; strictly positive when |c| > sqrt(p)/2."""
    op = MatrixOperator(MatrixKind.RE, profile)
    return constrained_minimum(
        op, [_re_constraint(profile), _re_translation_constraint(profile)], modes
    )


def solve_mn(profile: PeriodicProfile, modes: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Solve the real-part block system with right-hand side (c phi, phi),
    deflating the translation kernel (phi', c phi').

    The first component equals d(phi_c)/dc along the fixed-period branch and
    the second phi + c * d(phi_c)/dc, which the tests verify by finite
    differences.
    """
    op = MatrixOperator(MatrixKind.RE, profile)
    M = block_matrix(op, modes)
    n = M.shape[0] // 2
    phi = profile.phi if n == profile.grid.n else resample_periodic(profile.phi, n)
    dphi = profile.dphi if n == profile.grid.n else resample_periodic(profile.dphi, n)
    rhs = _stack(profile.c * phi, phi)
    kernel = _stack(dphi, profile.c * dphi)
    knorm = np.linalg.norm(kernel)
    if knorm == 0.0:
        raise SingularSystem("degenerate kernel direction")
    kernel = kernel / knorm
    deflated = M + np.outer(kernel, kernel)
    try:
        x = scipy.linalg.solve(deflated, rhs, assume_a="sym")
    except scipy.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    x = x - (kernel @ x) * kernel  # strip any residual kernel component
    residual = np.linalg.norm(M @ x - rhs) / np.linalg.norm(rhs)
    if residual > 1e-6:
        raise SingularSystem(f"deflated solve residual {residual:.2e}")
    return x[:n], x[n:]


def hill_report(
    op: HillOperator,
    m: int = 8,
    modes: int | None = None,
    zero_tolerance: float = DEFAULT_ZERO_TOL,
) -> HillReport:
    """Eigenvalues, inertial index and Floquet data in one record."""
    vals = hill_eigenvalues(op, m, modes)
    n_neg, n_zero = inertial_index(op, zero_tolerance, m, modes, check_floquet=False)
    if op.kind == "re":
        fl = floquet_theta(op.profile)
        theta, theta_val, row = fl.theta, fl.theta_from_value, fl.theta_table_row
    else:
        theta, theta_val, row = np.nan, np.nan, None
    return HillReport(
        eigenvalues=vals,
        n_negative=n_neg,
        n_zero=n_zero,
        theta=theta,
        theta_from_value=theta_val,
        theta_table_row=row,
        zero_tolerance=zero_tolerance,
    )
