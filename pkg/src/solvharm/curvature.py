"""Left-invariant Riemannian geometry at the identity.

Connection coefficients come from the Koszul formula applied to
structure constants; curvature, Ricci, sectional curvatures, Jacobi
operators and the covariant derivative of R are then pure tensor
algebra.  Homogeneity makes values at the identity global.
"""

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import DomainError
from .lie_metric import (MetricLieAlgebra, StandardSolvableData, ad_matrix,
                         extract_jmap, pair_decomposition,
                         symmetric_skew_split)

__all__ = [
    "levi_civita",
    "curvature_tensor",
    "ricci",
    "einstein_check",
    "sectional_curvature",
    "jacobi_operator_H",
    "jacobi_operator_central",
    "central_frame_split",
    "central_jacobi_blocks",
    "nabla_R",
    "nabla_R_norm",
    "curvature_norm",
]


def levi_civita(g: MetricLieAlgebra) -> np.ndarray:
    """Connection coefficients Gamma[i, j, :] = nabla_{e_i} e_j (Koszul)."""
    t = g.tensor
    return 0.5 * (t - np.einsum("jki->ijk", t) - np.einsum("ikj->ijk", t))


def curvature_tensor(g: MetricLieAlgebra, gamma: np.ndarray) -> np.ndarray:
    """R[i, j, k, :] = R(e_i, e_j) e_k for the given connection."""
    second = np.einsum("jkm,iml->ijkl", gamma, gamma)
    bracket_term = np.einsum("ijm,mkl->ijkl", g.tensor, gamma)
    return second - np.einsum("jikl->ijkl", second) - bracket_term


def ricci(g: MetricLieAlgebra, r: np.ndarray) -> np.ndarray:
    """Ricci tensor Ric[j, k] = sum_i <R(e_i, e_j) e_k, e_i>."""
    return np.einsum("ijki->jk", r)


def curvature_norm(r: np.ndarray) -> float:
    return float(np.sqrt((r**2).sum()))


def einstein_check(g: MetricLieAlgebra, tols: Tolerances = DEFAULT_TOLS):
    """Whether Ric = c id; returns (is_einstein, c, residual)."""
    ric = ricci(g, curvature_tensor(g, levi_civita(g)))
    c = float(np.trace(ric)) / g.dim
    residual = float(np.linalg.norm(ric - c * np.eye(g.dim)))
    return residual <= tols.einstein_residual, c, residual


def sectional_curvature(g: MetricLieAlgebra, r: np.ndarray, x, y) -> float:
    """K(x, y) = <R(x,y)y, x> / (|x|^2 |y|^2 - <x,y>^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gram = (x @ x) * (y @ y) - (x @ y) ** 2
    if gram <= 1e-12 * max(1.0, (x @ x) * (y @ y)):
        raise DomainError("sectional curvature needs a nondegenerate plane")
    num = np.einsum("i,j,k,ijkl,l->", x, y, y, r, x)
    return float(num / gram)


def jacobi_operator_H(g, a_vec) -> np.ndarray:
    """Jacobi operator R(. , A)A = -D_A^2 - [D_A, S_A] for A perp [s, s].

    ``g`` may be a :class:`MetricLieAlgebra` or a
    :class:`StandardSolvableData` (its adapted algebra is used).
    """
    alg = g.algebra if isinstance(g, StandardSolvableData) else g
    a_vec = np.asarray(a_vec, dtype=float)
    if abs(np.linalg.norm(a_vec) - 1.0) > 1e-10:
        raise DomainError("A must be a unit vector")
    # A perp [s,s]  <=>  no bracket has a component along A
    leak = np.abs(np.einsum("ijk,k->ij", alg.tensor, a_vec)).max()
    if leak > 1e-10:
        raise DomainError("A is not orthogonal to the derived algebra")
    d, s = symmetric_skew_split(ad_matrix(a_vec, alg))
    return -d @ d - (d @ s - s @ d)


def central_frame_split(d: StandardSolvableData, z_vec,
                        tols: Tolerances = DEFAULT_TOLS):
    """Frame data of the geodesic tangent to a unit top-eigenvector Z.

    Returns ``(mus, z_perp_cols, rho_stars, kernel_cols, pairs,
    pair_cols)``: ad_H eigendata on z meet Z^perp and the kernel/pair split of
    v for j(Z), all as columns in the adapted algebra basis.
    """
    alg = d.algebra
    z_vec = np.asarray(z_vec, dtype=float)
    if abs(np.linalg.norm(z_vec) - 1.0) > 1e-8:
        raise DomainError("Z must be a unit vector")
    off = [i for i in range(alg.dim) if i not in d.z_indices]
    if off and np.abs(z_vec[off]).max() > 1e-10:
        raise DomainError("Z must lie in the center block z")
    ad_h = d.ad_h()
    if np.linalg.norm(ad_h @ z_vec - z_vec) > 1e-8:
        raise DomainError("Z is not an eigenvector for the top eigenvalue 1")

    z_idx = list(d.z_indices)
    l = len(z_idx)
    # orthonormal basis of z meet Z^perp, diagonalizing ad_H there
    z_block = np.zeros((alg.dim, l))
    for col, idx in enumerate(z_idx):
        z_block[idx, col] = 1.0
    z_in_block = z_block.T @ z_vec
    comp = np.eye(l) - np.outer(z_in_block, z_in_block)
    u, s, _ = np.linalg.svd(comp)
    perp = u[:, : l - 1] if l > 1 else np.zeros((l, 0))
    ad_z = z_block.T @ ad_h @ z_block
    small = perp.T @ (0.5 * (ad_z + ad_z.T)) @ perp
    if l > 1:
        mus, vecs = np.linalg.eigh(small)
        z_perp_cols = z_block @ perp @ vecs
    else:
        mus = np.zeros(0)
        z_perp_cols = np.zeros((alg.dim, 0))

    # kernel / pair split of v for j(Z)
    v_idx = list(d.v_indices)
    m = len(v_idx)
    v_block = np.zeros((alg.dim, m))
    for col, idx in enumerate(v_idx):
        v_block[idx, col] = 1.0
    if m:
        jmap = extract_jmap(alg, d)
        j_z = jmap(z_vec[z_idx])
        ad_v = v_block.T @ ad_h @ v_block
        kernel_b, rho_stars, pair_b, pairs = pair_decomposition(
            0.5 * (ad_v + ad_v.T), j_z, tols.eigen_merge
        )
        kernel_cols = v_block @ kernel_b
        pair_cols = v_block @ pair_b
    else:
        rho_stars = np.zeros(0)
        pairs = np.zeros((0, 2))
        kernel_cols = np.zeros((alg.dim, 0))
        pair_cols = np.zeros((alg.dim, 0))
    return mus, z_perp_cols, rho_stars, kernel_cols, pairs, pair_cols


def central_jacobi_blocks(mus, rho_stars, pairs, t: float) -> np.ndarray:
    """Jacobi operator R(t) on the frame (xi, Z*_j, V*_k, V_i, ~V_i).

    The first slot is the parallel unit normal inside the totally
    geodesic H-Z plane (constant curvature -1); the remaining blocks are
    the closed forms of the operator along the central geodesic.
    """
    s, c = np.sinh(t), np.cosh(t)
    blocks = [np.array([[-1.0]])]
    for mu in np.atleast_1d(mus):
        blocks.append(np.array([[-(mu + s * s * mu * mu) / (c * c)]]))
    for rho in np.atleast_1d(rho_stars):
        blocks.append(np.array([[-(rho + s * s * rho * rho) / (c * c)]]))
    for rho, theta in np.atleast_2d(pairs) if len(pairs) else []:
        diag1 = theta * theta / 4.0 - rho - s * s * rho * rho
        diag2 = (theta * theta / 4.0 - (1.0 - rho)
                 - s * s * (1.0 - rho) ** 2)
        offd = s * theta * (rho - 0.5)
        blocks.append(np.array([[diag1, offd], [offd, diag2]]) / (c * c))
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    pos = 0
    for b in blocks:
        k = b.shape[0]
        out[pos:pos + k, pos:pos + k] = b
        pos += k
    return out


def jacobi_operator_central(d: StandardSolvableData, z_vec, t: float,
                            tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """R(t) along the central geodesic, in the canonical frame of Z."""
    mus, _, rho_stars, _, pairs, _ = central_frame_split(d, z_vec, tols)
    return central_jacobi_blocks(mus, rho_stars, pairs, t)


def nabla_R(g: MetricLieAlgebra, gamma=None, r=None) -> np.ndarray:
    """Covariant derivative (nabla_{e_l} R)(e_i, e_j) e_k, index [l,i,j,k,:]."""
    if gamma is None:
        gamma = levi_civita(g)
    if r is None:
        r = curvature_tensor(g, gamma)
    term0 = np.einsum("ijkm,lmp->lijkp", r, gamma)
    term1 = np.einsum("lim,mjkp->lijkp", gamma, r)
    term2 = np.einsum("ljm,imkp->lijkp", gamma, r)
    term3 = np.einsum("lkm,ijmp->lijkp", gamma, r)
    return term0 - term1 - term2 - term3


def nabla_R_norm(g: MetricLieAlgebra) -> float:
    """Frobenius norm of nabla R; zero iff the space is locally symmetric."""
    return float(np.sqrt((nabla_R(g) ** 2).sum()))
