"""Jacobi fields along geodesics: integration, stable limits, densities.

Everything is phrased in left-invariant frames, where the connection and
the Jacobi operator along the distinguished geodesics have explicit
closed forms.  Central geodesics (tangent to the top eigenvector Z of
the center) get a dedicated orthonormal frame of the normal bundle; the
volume-density test integrates the frame system along arbitrary
directions using the full connection and curvature tensors.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .config import DEFAULT_TOLS, Tolerances
from .curvature import (central_frame_split, central_jacobi_blocks,
                        curvature_tensor, levi_civita)
from .errors import (ConjugatePointError, DimensionError, DomainError,
                     NumericalError)
from .lie_metric import (MetricLieAlgebra, StandardSolvableData,
                         derived_algebra, _null_space)

__all__ = [
    "JacobiTensorSample",
    "CentralGeodesicFrame",
    "central_velocity",
    "covariant_derivative_along",
    "integrate_jacobi",
    "finite_horizon_tensor",
    "stable_jacobi_tensor",
    "mean_curvature_numeric",
    "to_parallel_frame",
    "volume_density",
]


def central_velocity(t: float):
    """Velocity coefficients of the central geodesic on (H, Z)."""
    return -math.tanh(t), 1.0 / math.cosh(t)


@dataclass(frozen=True)
class JacobiTensorSample:
    """Jacobi tensor values on a time grid.

    ``e_prime`` holds covariant derivatives; ``frame`` records whether
    coefficients refer to the left-invariant central frame or its
    parallel rotation.
    """

    t_grid: np.ndarray
    e: np.ndarray          # (nt, k, m)
    e_prime: np.ndarray    # (nt, k, m)
    frame: str = "left-invariant"


@dataclass(frozen=True)
class CentralGeodesicFrame:
    """Orthonormal frame of the normal bundle along a central geodesic.

    Slots: the parallel normal xi(t) inside the H-Z plane, the ad_H
    eigenvectors of z cut down to Z^perp, the kernel of j(Z) in v, and
    the rotation pairs (V_i, ~V_i).  Only xi depends on t; the pair
    fields rotate with connection speed theta_i / (2 cosh t).
    """

    data: StandardSolvableData
    z: np.ndarray
    mus: np.ndarray
    z_perp: np.ndarray
    rho_stars: np.ndarray
    kernel: np.ndarray
    pairs: np.ndarray
    pair_cols: np.ndarray

    @classmethod
    def build(cls, d: StandardSolvableData, z_vec=None,
              tols: Tolerances = DEFAULT_TOLS) -> "CentralGeodesicFrame":
        z_vec = d.z_top_vector if z_vec is None else np.asarray(z_vec, float)
        mus, z_perp, rho_stars, kernel, pairs, pair_cols = \
            central_frame_split(d, z_vec, tols)
        return cls(d, z_vec, mus, z_perp, rho_stars, kernel, pairs, pair_cols)

    @property
    def size(self) -> int:
        return 1 + len(self.mus) + len(self.rho_stars) + 2 * len(self.pairs)

    def velocity_vector(self, t: float) -> np.ndarray:
        vh, vz = central_velocity(t)
        return vh * self.data.h_vector + vz * self.z

    def xi(self, t: float) -> np.ndarray:
        """Parallel unit normal in the totally geodesic H-Z plane."""
        return (self.data.h_vector / math.cosh(t)) + math.tanh(t) * self.z

    def frame_matrix(self, t: float) -> np.ndarray:
        """Columns of the frame in the algebra basis, (dim, dim-1)."""
        return np.column_stack(
            [self.xi(t), self.z_perp, self.kernel, self.pair_cols]
        )

    def connection(self, t: float) -> np.ndarray:
        """Skew matrix W(t) with D/dt = d/dt + W on frame coefficients."""
        k = self.size
        w = np.zeros((k, k))
        offset = 1 + len(self.mus) + len(self.rho_stars)
        for i, (_, theta) in enumerate(self.pairs):
            rate = theta / (2.0 * math.cosh(t))
            w[offset + 2 * i, offset + 2 * i + 1] = rate
            w[offset + 2 * i + 1, offset + 2 * i] = -rate
        return w

    def jacobi_operator(self, t: float) -> np.ndarray:
        return central_jacobi_blocks(self.mus, self.rho_stars, self.pairs, t)


def covariant_derivative_along(d: StandardSolvableData, z_vec, t: float,
                               field) -> np.ndarray:
    """nabla_{gamma'(t)} of a left-invariant field, via the connection."""
    field = np.asarray(field, dtype=float)
    if field.shape != (d.algebra.dim,):
        raise DimensionError(f"field must have shape ({d.algebra.dim},)")
    z_vec = np.asarray(z_vec, dtype=float)
    vh, vz = central_velocity(t)
    u = vh * d.h_vector + vz * z_vec
    gamma = levi_civita(d.algebra)
    return np.einsum("i,ijk,j->k", u, gamma, field)


def _frame_rhs(frame: CentralGeodesicFrame, k: int, m: int):
    def rhs(t, y):
        c = y[: k * m].reshape(k, m)
        p = y[k * m:].reshape(k, m)
        w = frame.connection(t)
        r = frame.jacobi_operator(t)
        dc = p - w @ c
        dp = -r @ c - w @ p
        return np.concatenate([dc.ravel(), dp.ravel()])
    return rhs


def _solve_frame_system(frame: CentralGeodesicFrame, c0, p0, t_span, t_eval,
                        tols: Tolerances):
    k = frame.size
    c0 = np.asarray(c0, dtype=float).reshape(k, -1)
    p0 = np.asarray(p0, dtype=float).reshape(k, -1)
    m = c0.shape[1]
    y0 = np.concatenate([c0.ravel(), p0.ravel()])
    sol = solve_ivp(
        _frame_rhs(frame, k, m), t_span, y0, method="DOP853",
        t_eval=t_eval, rtol=tols.ode_rtol, atol=tols.ode_atol,
    )
    if not sol.success:
        raise NumericalError(f"Jacobi integration failed: {sol.message}")
    nt = sol.t.size
    c = sol.y[: k * m].T.reshape(nt, k, m)
    p = sol.y[k * m:].T.reshape(nt, k, m)
    return sol.t, c, p, sol.y[:, -1]


def integrate_jacobi(d: StandardSolvableData, z_vec, j0, j0prime,
                     t_max: float, steps: int = 200,
                     tols: Tolerances = DEFAULT_TOLS) -> JacobiTensorSample:
    """Integrate the Jacobi system D^2 J + R(t) J = 0 in the central frame.

    ``j0`` and ``j0prime`` are frame coefficients of the initial value
    and initial covariant derivative (vectors or matrices of columns).
    """
    frame = CentralGeodesicFrame.build(d, z_vec, tols)
    t_eval = np.linspace(0.0, t_max, steps + 1)
    t, c, p, _ = _solve_frame_system(frame, j0, j0prime, (0.0, t_max),
                                     t_eval, tols)
    return JacobiTensorSample(t_grid=t, e=c, e_prime=p)


def _frame_blocks(frame: CentralGeodesicFrame):
    """(offset, size) of the decoupled diagonal blocks of the frame system."""
    blocks = [(0, 1)]
    pos = 1
    for _ in range(len(frame.mus) + len(frame.rho_stars)):
        blocks.append((pos, 1))
        pos += 1
    for _ in range(len(frame.pairs)):
        blocks.append((pos, 2))
        pos += 2
    return blocks


def _block_finite_horizon(frame: CentralGeodesicFrame, offset: int, size: int,
                          t_grid, r: float, tols: Tolerances):
    """E_r and its covariant derivative for one decoupled block.

    Shooting per block keeps the terminal solve well conditioned: the
    scalar blocks are exact divisions and the 2x2 pair blocks only mix
    the growth rates of a single rotation plane.
    """
    sl = slice(offset, offset + size)

    def rhs(t, y):
        c = y[: 2 * size * size].reshape(size, 2 * size)
        p = y[2 * size * size:].reshape(size, 2 * size)
        w = frame.connection(t)[sl, sl]
        rr = frame.jacobi_operator(t)[sl, sl]
        return np.concatenate([(p - w @ c).ravel(), (-rr @ c - w @ p).ravel()])

    eye, zero = np.eye(size), np.zeros((size, size))
    y0 = np.concatenate([np.hstack([eye, zero]).ravel(),
                         np.hstack([zero, eye]).ravel()])
    t_eval = np.unique(np.concatenate([np.asarray(t_grid, float), [r]]))
    sol = solve_ivp(rhs, (0.0, r), y0, method="DOP853", t_eval=t_eval,
                    rtol=tols.ode_rtol, atol=tols.ode_atol)
    if not sol.success:
        raise NumericalError(f"Jacobi integration failed: {sol.message}")
    nt = sol.t.size
    c = sol.y[: 2 * size * size].T.reshape(nt, size, 2 * size)
    p = sol.y[2 * size * size:].T.reshape(nt, size, 2 * size)
    phi1, phi2 = c[:, :, :size], c[:, :, size:]
    dphi1, dphi2 = p[:, :, :size], p[:, :, size:]
    phi2_r = phi2[-1]
    scale = max(np.abs(phi2_r).max(), 1.0)
    if abs(np.linalg.det(phi2_r)) <= (tols.det_floor * scale) ** size:
        raise ConjugatePointError(f"singular terminal solve at r = {r}")
    coeff = -np.linalg.solve(phi2_r, phi1[-1])
    keep = np.isin(sol.t, np.asarray(t_grid, float))
    e_blk = phi1[keep] + phi2[keep] @ coeff
    ep_blk = dphi1[keep] + dphi2[keep] @ coeff
    return e_blk, ep_blk


def _assemble_horizon(frame: CentralGeodesicFrame, t_grid, r: float,
                      tols: Tolerances) -> JacobiTensorSample:
    t_grid = np.asarray(t_grid, dtype=float)
    k = frame.size
    e = np.zeros((t_grid.size, k, k))
    ep = np.zeros((t_grid.size, k, k))
    for offset, size in _frame_blocks(frame):
        sl = slice(offset, offset + size)
        e_blk, ep_blk = _block_finite_horizon(frame, offset, size, t_grid,
                                              r, tols)
        e[:, sl, sl] = e_blk
        ep[:, sl, sl] = ep_blk
    return JacobiTensorSample(t_grid=t_grid, e=e, e_prime=ep)


def finite_horizon_tensor(d: StandardSolvableData, z_vec, t_grid, r: float,
                          tols: Tolerances = DEFAULT_TOLS) -> JacobiTensorSample:
    """Jacobi tensor with E(0) = id, E(r) = 0, sampled on ``t_grid``."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[-1] > r:
        raise DomainError("horizon r must lie beyond the last grid point")
    frame = CentralGeodesicFrame.build(d, z_vec, tols)
    return _assemble_horizon(frame, t_grid, r, tols)


def stable_jacobi_tensor(d: StandardSolvableData, z_vec, t_grid,
                         r_max: float = None,
                         tols: Tolerances = DEFAULT_TOLS) -> JacobiTensorSample:
    """Stable Jacobi tensor as the doubling limit of finite horizons.

    Solves the boundary problem E_r(0) = id, E_r(r) = 0 by shooting with
    the two fundamental solutions of each decoupled frame block, then
    doubles r until the sampled tensors agree within
    ``tols.bvp_converged`` (or ``r_max``, default the horizon cap, is
    exceeded).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    r_max = tols.horizon_cap if r_max is None else float(r_max)
    if t_grid[-1] >= r_max:
        raise DomainError("r_max must lie beyond the last grid point")
    frame = CentralGeodesicFrame.build(d, z_vec, tols)
    r = min(max(2.0 * t_grid[-1], 8.0), 0.5 * r_max)
    prev = _assemble_horizon(frame, t_grid, r, tols)
    while True:
        r_next = 2.0 * r
        if r_next > r_max * (1.0 + 1e-12):
            raise NumericalError(
                f"stable tensor did not converge by r_max = {r_max}; "
                f"last horizon {r}"
            )
        cur = _assemble_horizon(frame, t_grid, r_next, tols)
        gap = float(np.abs(cur.e - prev.e).max())
        if gap <= tols.bvp_converged:
            return cur
        prev, r = cur, r_next


def mean_curvature_numeric(sample: JacobiTensorSample,
                           tols: Tolerances = DEFAULT_TOLS):
    """Horosphere mean curvature m(t) = -d/dt log|det E(t)| on the grid.

    Returns ``(m_fd, m_trace)``: central finite differences of
    log|det E| and the pointwise cross-check trace(-E' E^{-1}).
    """
    t = sample.t_grid
    dets = np.array([np.linalg.det(e) for e in sample.e])
    # a stable determinant decays exponentially but never changes sign;
    # a sign flip or underflow to zero marks a conjugate point
    if np.any(dets == 0.0) or np.any(np.sign(dets) != np.sign(dets[0])) \
            or np.abs(dets).min() < 1e-300:
        raise ConjugatePointError("det E vanishes on the grid")
    logs = np.log(np.abs(dets))
    m_fd = -np.gradient(logs, t)
    m_trace = np.array([
        -np.trace(ep @ np.linalg.inv(e))
        for e, ep in zip(sample.e, sample.e_prime)
    ])
    return m_fd, m_trace


def to_parallel_frame(sample: JacobiTensorSample,
                      frame: CentralGeodesicFrame) -> JacobiTensorSample:
    """Rotate pair blocks by theta/2 * gd(t) into the parallel frame."""
    if sample.frame == "parallel":
        return sample
    offset = 1 + len(frame.mus) + len(frame.rho_stars)
    e_out = sample.e.copy()
    ep_out = sample.e_prime.copy()
    for n, t in enumerate(sample.t_grid):
        gd = math.asin(math.tanh(t))
        rot = np.eye(frame.size)
        for i, (_, theta) in enumerate(frame.pairs):
            alpha = 0.5 * theta * gd
            ca, sa = math.cos(alpha), math.sin(alpha)
            sl = slice(offset + 2 * i, offset + 2 * i + 2)
            rot[sl, sl] = np.array([[ca, sa], [-sa, ca]])   # R(alpha)^T
        e_out[n] = rot @ sample.e[n]
        ep_out[n] = rot @ sample.e_prime[n]
    return JacobiTensorSample(t_grid=sample.t_grid.copy(), e=e_out,
                              e_prime=ep_out, frame="parallel")


# ---------------------------------------------------------------------------
# volume densities along arbitrary directions
# ---------------------------------------------------------------------------

def _density_dets(columns, velocities):
    """Signed dets of [J_1 .. J_{n-1}, u] per grid point, sign-normalized."""
    dets = np.array([
        np.linalg.det(np.column_stack([c, u]))
        for c, u in zip(columns, velocities)
    ])
    return dets


def volume_density(g: MetricLieAlgebra, v, t_grid,
                   tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """det A_v(t) of the Jacobi tensor with A(0) = 0, A'(0) = id.

    For v orthogonal to [s, s] the geodesic is a one-parameter subgroup
    and the constant-coefficient Jacobi system is solved by one matrix
    exponential per grid point; otherwise the geodesic equation
    u' = -nabla_u u and the frame Jacobi system are integrated jointly.
    Harmonicity makes the result independent of the direction v.
    """
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise DomainError("direction v must be a unit vector")
    t_grid = np.asarray(t_grid, dtype=float)
    n = g.dim
    gamma = levi_civita(g)
    r_tensor = curvature_tensor(g, gamma)
    perp = _null_space(v[np.newaxis, :])

    derived = derived_algebra(g)
    if derived.shape[1] == 0 or np.linalg.norm(derived.T @ v) <= 1e-12:
        # one-parameter-subgroup geodesic: constant coefficients
        w_conn = np.einsum("i,ijl->lj", v, gamma)      # nabla_v on the frame
        r_v = np.einsum("a,b,jabl->lj", v, v, r_tensor)
        s_t = perp.T @ w_conn @ perp
        r_t = perp.T @ r_v @ perp
        k = n - 1
        companion = np.zeros((2 * k, 2 * k))
        companion[:k, k:] = np.eye(k)
        companion[k:, :k] = -(s_t @ s_t + r_t)
        companion[k:, k:] = -2.0 * s_t
        from .numerics import matrix_exponential
        dets = []
        for t in t_grid:
            phi12 = matrix_exponential(t * companion)[:k, k:]
            dets.append(np.linalg.det(phi12))
        dets = np.array(dets)
    else:
        k = n - 1

        def rhs(t, y):
            u = y[:n]
            c = y[n: n + n * k].reshape(n, k)
            p = y[n + n * k:].reshape(n, k)
            du = -np.einsum("i,j,ijl->l", u, u, gamma)
            w = np.einsum("i,ijl->lj", u, gamma)
            r_u = np.einsum("a,b,jabl->lj", u, u, r_tensor)
            dc = p - w @ c
            dp = -r_u @ c - w @ p
            return np.concatenate([du, dc.ravel(), dp.ravel()])

        y0 = np.concatenate([v, np.zeros(n * k), perp.ravel()])
        span_end = max(float(t_grid[-1]), 1e-12)
        sol = solve_ivp(rhs, (0.0, span_end), y0, method="DOP853",
                        t_eval=t_grid, rtol=tols.ode_rtol, atol=tols.ode_atol)
        if not sol.success:
            raise NumericalError(f"geodesic integration failed: {sol.message}")
        cols = [sol.y[n: n + n * k, i].reshape(n, k) for i in range(sol.t.size)]
        vels = [sol.y[:n, i] for i in range(sol.t.size)]
        dets = _density_dets(cols, vels)

    # orient so the density is positive right after 0, then check for
    # conjugate points at the interior grid times
    interior = t_grid > 1e-9
    if np.any(interior):
        first = np.argmax(interior)
        sign = math.copysign(1.0, dets[first])
        dets = sign * dets
        bad = interior & (dets < tols.det_floor)
        if np.any(bad):
            raise ConjugatePointError(
                f"volume density vanishes at t = {t_grid[np.argmax(bad)]:.6g}"
            )
    return dets
