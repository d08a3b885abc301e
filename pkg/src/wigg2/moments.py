"""Symmetrically ordered photon-number moments and g2(0).

For any state, the symmetric-order moments are plain integrals against
the Wigner function:
    nw  = int 1/2 (x^2 + p^2)   W dx dp
    nw2 = int 1/4 (x^2 + p^2)^2 W dx dp
and
    g2(0) = (nw2 - 2 nw + 1/2) / (nw - 1/2)^2.

For a Gaussian with diagonal covariance diag(a, b) and mean (x0, p0)
in the principal axes the closed form is
    nw  = [x0^2 + p0^2 + a + b] / 2
    nw2 = [x0^4 + p0^4 + 2 x0^2 p0^2 + 3 a^2 + 3 b^2 + 2 a b
           + 2 x0^2 (3a + b) + 2 p0^2 (a + 3b)] / 4.
Both kernels are rotation invariant, so diagonalizing first is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, GridTooSmallError, NearVacuumError
from .states import GaussianState, wigner_eval

DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class WeylMoments:
    """The pair (<n_W>, <n_W^2>).  nw >= 1/2 with equality at vacuum."""

    nw: float
    nw2: float


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint-rule grid: half_width is in units of the largest sigma of
    the integrand (recommended >= 6), nodes per axis (recommended >= 64).
    Too-small grids are caught by the normalization check at use time,
    not at construction."""

    half_width: float = 8.0
    nodes: int = 801

    def __post_init__(self):
        if self.half_width <= 0.0 or self.nodes < 2:
            raise DomainError("QuadratureGrid: need half_width > 0 and nodes >= 2")


@dataclass(frozen=True)
class G2Value:
    value: float
    mean_photon: float


def weyl_moments_analytic(state: GaussianState) -> WeylMoments:
    """Closed-form symmetric moments of a Gaussian state (principal-axes
    route: diagonalize the covariance, rotate the mean along)."""
    w, vecs = state.cov.principal_axes()
    a, b = float(w[0]), float(w[1])
    m = vecs.T @ state.mean_vector()
    x0, p0 = float(m[0]), float(m[1])
    x2, p2 = x0 * x0, p0 * p0
    nw = 0.5 * (x2 + p2 + a + b)
    nw2 = 0.25 * (
        x2 * x2 + p2 * p2 + 2.0 * x2 * p2
        + 3.0 * a * a + 3.0 * b * b + 2.0 * a * b
        + 2.0 * x2 * (3.0 * a + b)
        + 2.0 * p2 * (a + 3.0 * b)
    )
    return WeylMoments(nw, nw2)


def weyl_moments_numeric(
    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray],
    grid: QuadratureGrid = QuadratureGrid(),
    sigma: float = 1.0,
    center: tuple[float, float] = (0.0, 0.0),
    norm_tol: float = 1e-6,
) -> WeylMoments:
    """Midpoint quadrature of the moment integrals for any (vectorized)
    Wigner evaluator.

    The grid spans center +- half_width * sigma per axis.  The evaluator
    must integrate to 1 on the grid within norm_tol, otherwise a
    GridTooSmallError reports the deficit.
    """
    L = grid.half_width * sigma
    n = grid.nodes
    h = 2.0 * L / n
    axis = -L + h * (np.arange(n) + 0.5)
    X, P = np.meshgrid(center[0] + axis, center[1] + axis, indexing="ij")
    W = np.asarray(evaluator(X, P), dtype=float)
    cell = h * h
    mass = float(W.sum() * cell)
    if abs(mass - 1.0) > norm_tol:
        raise GridTooSmallError(
            f"evaluator integrates to {mass:.9g} on the grid "
            f"(deficit {1.0 - mass:.3g}); enlarge half_width/nodes",
            deficit=1.0 - mass,
        )
    r2 = X * X + P * P
    nw = float((0.5 * r2 * W).sum() * cell)
    nw2 = float((0.25 * r2 * r2 * W).sum() * cell)
    return WeylMoments(nw, nw2)


def weyl_moments_numeric_state(
    state: GaussianState, grid: QuadratureGrid = QuadratureGrid()
) -> WeylMoments:
    """Numeric-quadrature moments of a Gaussian state; independent route
    from weyl_moments_analytic (used as its oracle)."""
    w, _ = state.cov.principal_axes()
    sigma = math.sqrt(float(w[1]))
    center = (state.mean.x, state.mean.p)
    # widen so the grid also covers the displaced peak
    reach = math.hypot(state.mean.x, state.mean.p)
    eff_sigma = sigma + reach / grid.half_width
    return weyl_moments_numeric(
        lambda x, p: wigner_eval(state, x, p), grid, sigma=eff_sigma, center=center
    )


def g2_from_moments(m: WeylMoments, epsilon: float = DEFAULT_EPSILON) -> G2Value:
    """g2(0) from symmetric moments.

    Near vacuum both numerator and denominator vanish; mean photon below
    epsilon raises NearVacuumError.  Passing epsilon = 0 returns the raw
    (possibly non-finite) ratio instead.
    """
    n = m.nw - 0.5
    if n < epsilon:
        raise NearVacuumError(
            f"mean photon number {n:.3g} below guard {epsilon:.3g}; "
            "g2(0) is 0/0 at vacuum"
        )
    num = m.nw2 - 2.0 * m.nw + 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        value = float(np.float64(num) / np.float64(n) ** 2)
    return G2Value(value, n)


def g2_gaussian(state: GaussianState, epsilon: float = DEFAULT_EPSILON) -> G2Value:
    """Analytic g2(0) of a Gaussian state.

    Evaluated in a cancellation-free form: with principal variances
    a, b written as u = a - 1/2, v = b - 1/2 and m1 = x0^2, m2 = p0^2,
        nw2 - 2 nw + 1/2 = [(m1+m2)^2 + 3u^2 + 3v^2 + 2uv
                            + 2 m1 (3u + v) + 2 m2 (u + 3v)] / 4
        (nw - 1/2)^2     = (m1 + m2 + u + v)^2 / 4,
    so weakly excited states (where nw2 - 2 nw + 1/2 suffers massive
    cancellation when formed from the raw moments) stay accurate.
    """
    w, vecs = state.cov.principal_axes()
    u, v = float(w[0]) - 0.5, float(w[1]) - 0.5
    m = vecs.T @ state.mean_vector()
    m1, m2 = float(m[0]) ** 2, float(m[1]) ** 2
    n = 0.5 * (m1 + m2 + u + v)
    if n < epsilon:
        raise NearVacuumError(
            f"mean photon number {n:.3g} below guard {epsilon:.3g}; "
            "g2(0) is 0/0 at vacuum"
        )
    num = ((m1 + m2) ** 2 + 3.0 * u * u + 3.0 * v * v + 2.0 * u * v
           + 2.0 * m1 * (3.0 * u + v) + 2.0 * m2 * (u + 3.0 * v))
    with np.errstate(divide="ignore", invalid="ignore"):
        value = float(np.float64(num) / np.float64(m1 + m2 + u + v) ** 2)
    return G2Value(value, n)


def fig1_table(n_grid: Sequence[float]):
    """Rows (n, g2_coherent, g2_thermal, g2_squeezed) for a grid of mean
    photon numbers: the three reference curves 1, 2 and 3 + 1/n."""
    rows = []
    for n in n_grid:
        n = float(n)
        if n <= 0.0:
            raise DomainError(f"fig1_table: mean photon number must be > 0, got {n}")
        rows.append((n, 1.0, 2.0, 3.0 + 1.0 / n))
    return rows
