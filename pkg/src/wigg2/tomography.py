"""Simulated homodyne arm: quadrature sampling, Gaussian covariance
reconstruction, and g2(0) inference with bootstrap intervals.

Reconstruction is covariance estimation in moment space: the per-angle
sample variances are fit by
    V(theta) = vxx cos^2(theta) + vpp sin^2(theta) + vxp sin(2 theta),
which is the rotated-Gaussian fit expressed on sufficient statistics.
Detector efficiency is modeled as pre-detection attenuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .counting import CountingConfig, g2_estimate_clicks, simulate_hbt
from .errors import (DomainError, FitError, IdentifiabilityError,
                     NearVacuumError, UnstableInferenceError)
from .moments import DEFAULT_EPSILON, g2_gaussian
from .states import (CovarianceMatrix, GaussianState, PhasePoint, attenuate,
                     hwp_mix, marginal, reduce_mode, two_mode_squeezed_vacuum)

DEFAULT_ANGLES = tuple(np.linspace(0.0, math.pi, 12, endpoint=False))
BOOTSTRAP_SIZE = 200


@dataclass(frozen=True)
class HomodyneDataset:
    """Quadrature samples grouped by local-oscillator angle."""

    angles: np.ndarray          # radians, in [0, pi)
    samples: tuple              # tuple of float arrays, one per angle
    seed: int
    eta_hd: float

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        if angles.size < 1:
            raise DomainError("HomodyneDataset: need at least one angle")
        if np.any(angles < 0.0) or np.any(angles >= math.pi):
            raise DomainError("HomodyneDataset: angles must lie in [0, pi)")
        angles.setflags(write=False)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "samples",
                           tuple(np.asarray(s, dtype=float) for s in self.samples))


@dataclass(frozen=True)
class ReconstructionResult:
    state: GaussianState                 # physicality-projected estimate
    raw_cov: tuple                       # (vxx, vpp, vxp) before projection
    angle_variances: np.ndarray
    residual: float
    bootstrap_states: tuple              # GaussianState or None per member


@dataclass(frozen=True)
class G2Interval:
    value: float
    ci_low: float
    ci_high: float
    n_guarded: int = 0


@dataclass(frozen=True)
class SweepFit:
    a: float
    b: float
    c: float
    residual: float
    n_iter: int


def simulate_homodyne(
    state: GaussianState,
    angles: Sequence[float] = DEFAULT_ANGLES,
    per_angle: int = 10_000,
    eta_hd: float = 1.0,
    seed: int = 0,
) -> HomodyneDataset:
    """Draw per_angle quadrature samples at each angle from the marginals
    of the (attenuated) state.  Deterministic in seed."""
    if per_angle < 2:
        raise DomainError("simulate_homodyne: per_angle must be >= 2")
    lossy = attenuate(state, eta_hd)
    rng = np.random.default_rng(seed)
    samples = []
    for theta in angles:
        m, v = marginal(lossy, theta)
        samples.append(rng.normal(m, math.sqrt(v), per_angle))
    return HomodyneDataset(np.asarray(angles, dtype=float), tuple(samples),
                           seed, eta_hd)


def _solve_covariance(angles, variances):
    """Least-squares solve of the angle model for (vxx, vpp, vxp)."""
    c = np.cos(angles)
    s = np.sin(angles)
    distinct = np.unique(np.round(angles, 12)).size
    if distinct >= 3:
        A = np.column_stack([c * c, s * s, np.sin(2.0 * angles)])
        if np.linalg.matrix_rank(A, tol=1e-10) < 3:
            raise IdentifiabilityError(
                "angle set cannot determine (vxx, vpp, vxp); "
                "use >= 3 distinct angles in general position"
            )
        sol, *_ = np.linalg.lstsq(A, variances, rcond=None)
        resid = float(np.linalg.norm(A @ sol - variances))
        return float(sol[0]), float(sol[1]), float(sol[2]), resid
    if distinct == 2 and abs(abs(angles[0] - angles[1]) - math.pi / 2) < 1e-9:
        # orthogonal pair: vxp constrained to 0
        A = np.column_stack([c * c, s * s])
        sol, *_ = np.linalg.lstsq(A, variances, rcond=None)
        resid = float(np.linalg.norm(A @ sol - variances))
        return float(sol[0]), float(sol[1]), 0.0, resid
    raise IdentifiabilityError(
        "need >= 3 distinct angles, or exactly 2 orthogonal ones"
    )


def _solve_mean(angles, means):
    A = np.column_stack([np.cos(angles), np.sin(angles)])
    if np.linalg.matrix_rank(A, tol=1e-10) < 2:
        raise IdentifiabilityError("angle set cannot determine the mean vector")
    sol, *_ = np.linalg.lstsq(A, means, rcond=None)
    return float(sol[0]), float(sol[1])


def project_physical(vxx: float, vpp: float, vxp: float) -> CovarianceMatrix:
    """Project an estimated covariance onto the physical set: clip
    eigenvalues positive, then scale both principal variances by the
    minimal common factor restoring det V = 1/4 when det < 1/4."""
    M = np.array([[vxx, vxp], [vxp, vpp]])
    w, v = np.linalg.eigh(M)
    w = np.maximum(w, 1e-12)
    det = w[0] * w[1]
    if det < 0.25:
        w = w * math.sqrt(0.25 / det)
    M = v @ np.diag(w) @ v.T
    return CovarianceMatrix(float(M[0, 0]), float(M[1, 1]), float(M[0, 1]))


def _try_state(vxx, vpp, vxp, mx, mp) -> Optional[GaussianState]:
    # raw (unprojected) estimate: clipping det up to 1/4 would bias the
    # moment ratio downward, so g2 inference keeps the fitted moments as-is
    # (CovarianceMatrix only requires positive definiteness)
    try:
        return GaussianState(PhasePoint(mx, mp), CovarianceMatrix(vxx, vpp, vxp))
    except DomainError:
        return None


def estimate_covariance(
    data: HomodyneDataset,
    n_boot: int = BOOTSTRAP_SIZE,
    boot_seed: int = 0,
) -> ReconstructionResult:
    """Estimate mean and covariance from a homodyne dataset, with
    per-angle bootstrap resamples (size n_boot) for interval inference."""
    means = np.array([s.mean() for s in data.samples])
    variances = np.array([s.var(ddof=1) for s in data.samples])
    vxx, vpp, vxp, resid = _solve_covariance(data.angles, variances)
    mx, mp = _solve_mean(data.angles, means)
    state = GaussianState(PhasePoint(mx, mp), project_physical(vxx, vpp, vxp))

    boot_means = np.empty((n_boot, len(data.samples)))
    boot_vars = np.empty((n_boot, len(data.samples)))
    for k, s in enumerate(data.samples):
        bm, bv = kernels.boot_moments(s, n_boot, boot_seed + 7919 * k)
        boot_means[:, k] = bm
        boot_vars[:, k] = bv
    boot_states = []
    for b in range(n_boot):
        bvxx, bvpp, bvxp, _ = _solve_covariance(data.angles, boot_vars[b])
        bmx, bmp = _solve_mean(data.angles, boot_means[b])
        boot_states.append(_try_state(bvxx, bvpp, bvxp, bmx, bmp))
    return ReconstructionResult(state, (vxx, vpp, vxp), variances, resid,
                                tuple(boot_states))


def estimate_covariance_from_moments(angles, means, variances) -> GaussianState:
    """Noiseless-moment entry point (exact roundtrip check): no bootstrap."""
    angles = np.asarray(angles, dtype=float)
    vxx, vpp, vxp, _ = _solve_covariance(angles, np.asarray(variances, dtype=float))
    mx, mp = _solve_mean(angles, np.asarray(means, dtype=float))
    return GaussianState(PhasePoint(mx, mp), project_physical(vxx, vpp, vxp))


def g2_from_reconstruction(
    rec: ReconstructionResult, epsilon: float = DEFAULT_EPSILON
) -> G2Interval:
    """Point estimate and percentile bootstrap CI (2.5/97.5) of g2(0).

    Both the point estimate and the bootstrap members are evaluated on
    the raw fitted moments (not the physicality-projected state): the
    det >= 1/4 projection only ever inflates the estimated mean photon
    number and would bias g2 low.  Bootstrap members caught by the
    near-vacuum guard (or with non-positive-definite resampled
    covariances) are counted, not dropped silently; a guarded majority
    raises UnstableInferenceError.
    """
    values = []
    guarded = 0
    for bs in rec.bootstrap_states:
        if bs is None:
            guarded += 1
            continue
        try:
            values.append(g2_gaussian(bs, epsilon).value)
        except NearVacuumError:
            guarded += 1
    n_members = len(rec.bootstrap_states)
    if guarded > n_members // 2:
        raise UnstableInferenceError(
            f"{guarded}/{n_members} bootstrap members hit the near-vacuum "
            "guard; the reconstruction is too close to vacuum for g2 inference"
        )
    raw = _try_state(rec.raw_cov[0], rec.raw_cov[1], rec.raw_cov[2],
                     rec.state.mean.x, rec.state.mean.p)
    point = g2_gaussian(raw if raw is not None else rec.state, epsilon).value
    lo, hi = np.percentile(values, [2.5, 97.5])
    return G2Interval(point, float(lo), float(hi), guarded)


# ---------------------------------------------------------------------------
# HWP sweep


@dataclass(frozen=True)
class SweepRow:
    theta_deg: float
    g2_analytic: float
    g2_direct: float
    g2_direct_err: float
    g2_homodyne: float
    g2_ci_low: float
    g2_ci_high: float
    vx: float
    vp: float


def hwp_sweep(
    r: float,
    thetas_deg: Sequence[float],
    counting: CountingConfig,
    angles: Sequence[float] = DEFAULT_ANGLES,
    per_angle: int = 10_000,
    eta_hd: float = 1.0,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
) -> list[SweepRow]:
    """Run the analytic / direct-counting / homodyne comparison across
    half-wave-plate angles for a twin beam of squeezing r.

    Homodyne rows where inference is unstable (near-vacuum bootstrap
    majority) report NaN for the homodyne columns.
    """
    tb = two_mode_squeezed_vacuum(r)
    rows = []
    for i, th in enumerate(thetas_deg):
        state = reduce_mode(hwp_mix(tb, th), 1)
        analytic = g2_gaussian(state, epsilon).value
        cfg = CountingConfig(
            n_windows=counting.n_windows, eta_det=counting.eta_det,
            dark_prob=counting.dark_prob, split=counting.split,
            seed=counting.seed + 1_000_003 * i, n_max=counting.n_max,
            workers=counting.workers,
        )
        rec = simulate_hbt(state, cfg)
        g2d, g2d_err = g2_estimate_clicks(rec)
        data = simulate_homodyne(state, angles, per_angle, eta_hd,
                                 seed=seed + 2_000_029 * i)
        recon = estimate_covariance(data, boot_seed=seed + 3_000_073 * i)
        try:
            hom = g2_from_reconstruction(recon, epsilon)
            g2h, lo, hi = hom.value, hom.ci_low, hom.ci_high
        except UnstableInferenceError:
            g2h = lo = hi = float("nan")
        rows.append(SweepRow(
            float(th), analytic, g2d, g2d_err, g2h, lo, hi,
            recon.state.cov.vxx, recon.state.cov.vpp,
        ))
    return rows


# ---------------------------------------------------------------------------
# angle-model fit f(theta) = a sin^2((b + theta) pi / 45) + c


def _sweep_model(params, theta_deg):
    a, b, c = params
    phi = (b + theta_deg) * math.pi / 45.0
    return a * np.sin(phi) ** 2 + c


def fit_sweep_model(
    points: Sequence[tuple],
    max_iter: int = 100,
    grad_tol: float = 1e-10,
) -> SweepFit:
    """Gauss-Newton fit (with step halving) of the HWP-angle model to
    (theta_deg, g2) points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise DomainError("fit_sweep_model: need >= 3 (theta_deg, g2) points")
    theta, y = pts[:, 0], pts[:, 1]
    spread = float(y.max() - y.min())
    params = np.array([spread, 0.0, float(y.min())])

    def residuals(p):
        return _sweep_model(p, theta) - y

    def jacobian(p):
        a, b, _ = p
        phi = (b + theta) * math.pi / 45.0
        return np.column_stack([
            np.sin(phi) ** 2,
            a * np.sin(2.0 * phi) * math.pi / 45.0,
            np.ones_like(theta),
        ])

    res = residuals(params)
    cost = float(res @ res)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        J = jacobian(params)
        grad = J.T @ res
        if float(np.max(np.abs(grad))) <= grad_tol:
            converged = True
            break
        step, *_ = np.linalg.lstsq(J, -res, rcond=None)
        scale = 1.0
        for _ in range(30):
            trial = params + scale * step
            tres = residuals(trial)
            tcost = float(tres @ tres)
            if tcost <= cost:
                params, res, cost = trial, tres, tcost
                break
            scale *= 0.5
        else:
            break
    else:
        J = jacobian(params)
        converged = float(np.max(np.abs(J.T @ res))) <= grad_tol
    if not converged:
        raise FitError(
            f"Gauss-Newton did not converge in {max_iter} iterations "
            f"(residual norm {math.sqrt(cost):.3g})",
            residual=math.sqrt(cost),
        )
    a, b, c = params
    if a < 0.0:
        # a sin^2(phi) + c == -a sin^2(phi + pi/2) + (c + a)
        a, b, c = -a, b + 22.5, c + a
    b = (b + 22.5) % 45.0 - 22.5
    if a == 0.0:
        b = 0.0
    return SweepFit(float(a), float(b), float(c), math.sqrt(cost), it)
