"""Estimators built on moments: least squares, the Radon-Nikodym ratio, and
matrix-moment analytics.

Least squares projects f onto the basis span (linear in Q_k, coefficients
G^{-1}<fQ>).  The Radon-Nikodym estimator is the Nevai-operator ratio of two
quadratic forms, (q^T G^{-1} F G^{-1} q)/(q^T G^{-1} q) with q the vector of
basis values at the evaluation point.  Being a positive-weight average of f
over the measure, the ratio stays inside [min f, max f], keeps the sign of f,
and tends to a constant away from the support, where least squares diverges.

The matrix moments also carry spectral structure: trace averages, the
generalized eigenbasis of F psi = lambda G psi (which diagonalizes F and G
simultaneously), and value-space (Lebesgue-style) integration that counts
eigenvalues per intensity bin the way density of states counts energy levels.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from .basis import BasisKind, CoeffVector, evaluate_all
from .kernels import bilinear_grid, quadform_grid, quadform_points
from .linalg import GeneralizedEig, SpdFactor, cholesky, generalized_sym_eig, spd_solve
from .moments import FunctionOracle, MomentSet
from .pgm import GrayImage

__all__ = [
    "METHODS",
    "Reconstructor",
    "ReconstructionResult",
    "LebesgueHistogram",
    "build_reconstructor",
    "eval_ls",
    "eval_rn",
    "eval_ls_grid",
    "eval_rn_grid",
    "eval_psi_x0",
    "reconstruct_image",
    "spur_average",
    "spur_product_average",
    "natural_basis",
    "psi_state",
    "eval_psi_state",
    "lebesgue_measure",
    "lebesgue_integral",
    "reconstruct_derivative_1d",
    "differentiate_reconstruction",
]

METHODS = ("ls", "rn")


def _check_method(method: str) -> str:
    m = method.lower()
    if m not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return m


@dataclass(frozen=True)
class Reconstructor:
    """Precomputed evaluation machinery for one MomentSet.

    ``ls_coeffs`` is G^{-1}<fQ> shaped (n,) in 1D or (nx, ny) in 2D;
    ``rn_core`` is the symmetrized M = G^{-1} F G^{-1}; ``g_fac`` applies
    G^{-1} to single points, while ``g_inv`` (formed once through the
    factor) feeds the grid kernels.
    """

    basis: BasisKind
    dims: tuple
    ls_coeffs: np.ndarray
    rn_core: np.ndarray
    g_fac: SpdFactor
    g_inv: np.ndarray

    @property
    def is_2d(self) -> bool:
        return len(self.dims) == 2

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def ls_coeffvector(self) -> CoeffVector:
        if self.is_2d:
            raise ValueError("CoeffVector form exists only for 1D reconstructors")
        return CoeffVector(self.basis, self.ls_coeffs)


def build_reconstructor(ms: MomentSet) -> Reconstructor:
    """Factor G and assemble the least-squares and ratio-estimator cores."""
    fac = cholesky(ms.G)
    if ms.is_2d:
        nx, ny = ms.n
        head = np.ascontiguousarray(ms.vec[:nx, :ny]).reshape(nx * ny)
    else:
        head = ms.vec[: ms.n]
    ls = spd_solve(fac, head)
    if ms.is_2d:
        ls = ls.reshape(ms.n)
    m = spd_solve(fac, np.ascontiguousarray(spd_solve(fac, ms.F).T))
    m = 0.5 * (m + m.T)
    g_inv = spd_solve(fac, np.eye(fac.dim))
    g_inv = 0.5 * (g_inv + g_inv.T)
    dims = ms.n if ms.is_2d else (ms.n,)
    return Reconstructor(
        basis=ms.basis, dims=dims, ls_coeffs=ls, rn_core=m, g_fac=fac, g_inv=g_inv
    )


def _point_vectors(r: Reconstructor, x):
    if r.is_2d:
        px, py = x
        qx = evaluate_all(r.basis, r.dims[0], float(px))
        qy = evaluate_all(r.basis, r.dims[1], float(py))
        return np.outer(qx, qy).ravel()
    return evaluate_all(r.basis, r.dims[0], float(x))


def eval_ls(r: Reconstructor, x) -> float:
    """Least-squares estimate at one point (a pair (x, y) in 2D)."""
    q = _point_vectors(r, x)
    return float(q @ r.ls_coeffs.ravel())


def eval_rn(r: Reconstructor, x) -> float:
    """Radon-Nikodym (Nevai operator) estimate at one point.

    Ratio of q^T M q over q^T G^{-1} q; the denominator is positive for
    any q != 0 since G is positive definite.
    """
    q = _point_vectors(r, x)
    num = float(q @ r.rn_core @ q)
    den = float(q @ spd_solve(r.g_fac, q))
    return num / den


def eval_psi_x0(r: Reconstructor, x0, x) -> float:
    """Localized state psi_x0 evaluated at x.

    The reproducing-kernel column q(x)^T G^{-1} q(x0), normalized so the
    squared state integrates to 1 under the measure.
    """
    q0 = _point_vectors(r, x0)
    qx = _point_vectors(r, x)
    g_inv_q0 = spd_solve(r.g_fac, q0)
    return float(qx @ g_inv_q0) / float(np.sqrt(q0 @ g_inv_q0))


def eval_ls_grid(r: Reconstructor, xs: np.ndarray) -> np.ndarray:
    """Vectorized 1D least-squares curve over sample points xs."""
    if r.is_2d:
        raise ValueError("grid curve evaluation is 1D; use reconstruct_image in 2D")
    q = np.ascontiguousarray(evaluate_all(r.basis, r.dims[0], np.asarray(xs, dtype=float)))
    return r.ls_coeffs @ q


def eval_rn_grid(r: Reconstructor, xs: np.ndarray) -> np.ndarray:
    """Vectorized 1D ratio-estimator curve over sample points xs."""
    if r.is_2d:
        raise ValueError("grid curve evaluation is 1D; use reconstruct_image in 2D")
    q = np.ascontiguousarray(evaluate_all(r.basis, r.dims[0], np.asarray(xs, dtype=float)))
    num = quadform_points(r.rn_core, q)
    den = quadform_points(r.g_inv, q)
    return num / den


@dataclass(frozen=True)
class ReconstructionResult:
    """Raw estimator values over a pixel grid, before any clamping.

    Least-squares overshoot is a finding, not an artifact to hide, so
    clamping to [0, 1] happens only when quantizing to an image/bytes;
    the pre-clamp extremes stay available here.
    """

    values: np.ndarray
    method: str
    pre_clamp_min: float
    pre_clamp_max: float

    @property
    def image(self) -> GrayImage:
        return GrayImage.from_array(np.clip(self.values, 0.0, 1.0))


def reconstruct_image(r: Reconstructor, dims: tuple, method: str) -> ReconstructionResult:
    """Evaluate the chosen estimator at every pixel center of a dx-by-dy grid."""
    method = _check_method(method)
    if not r.is_2d:
        raise ValueError("reconstruct_image needs a 2D reconstructor")
    dx, dy = dims
    if dx < 2 or dy < 2:
        raise ValueError("output grid needs at least 2x2 pixels")
    nx, ny = r.dims
    xs = np.arange(dx) / (dx - 1)
    ys = np.arange(dy) / (dy - 1)
    qx = np.ascontiguousarray(evaluate_all(r.basis, nx, xs))
    qy = np.ascontiguousarray(evaluate_all(r.basis, ny, ys))
    if method == "ls":
        values = bilinear_grid(np.ascontiguousarray(r.ls_coeffs), qx, qy)
    else:
        m4 = np.ascontiguousarray(r.rn_core.reshape(nx, ny, nx, ny))
        g4 = np.ascontiguousarray(r.g_inv.reshape(nx, ny, nx, ny))
        values = quadform_grid(m4, qx, qy) / quadform_grid(g4, qx, qy)
    return ReconstructionResult(
        values=values,
        method=method,
        pre_clamp_min=float(values.min()),
        pre_clamp_max=float(values.max()),
    )


def spur_average(ms: MomentSet) -> float:
    """Moment-space mean of f: Spur(G^{-1} F) / dim G."""
    fac = cholesky(ms.G)
    return float(np.trace(spd_solve(fac, ms.F))) / ms.dim


def spur_product_average(ms_f: MomentSet, ms_g: MomentSet) -> float:
    """Moment-space mean of a product: Spur(G^{-1} F G^{-1} H) / dim G.

    Both sets must be built over the identical measure and basis (their
    Gramm matrices must agree to 1e-14 relative); symmetric in (f, g).
    """
    if ms_f.basis != ms_g.basis or ms_f.n != ms_g.n:
        raise ValueError("moment sets use different bases or sizes")
    scale = float(np.max(np.abs(ms_f.G))) or 1.0
    if float(np.max(np.abs(ms_f.G - ms_g.G))) > 1e-14 * scale:
        raise ValueError("moment sets were built over different measures")
    fac = cholesky(ms_f.G)
    a = spd_solve(fac, ms_f.F)
    b = spd_solve(fac, ms_g.F)
    return float(np.sum(a * b.T)) / ms_f.dim


def natural_basis(ms: MomentSet) -> GeneralizedEig:
    """Eigenbasis of F psi = lambda G psi; diagonalizes F and G together."""
    return generalized_sym_eig(ms.F, cholesky(ms.G))


def psi_state(ms: MomentSet, eig: GeneralizedEig, s: int) -> CoeffVector:
    """Eigenstate s as a coefficient vector psi^(s) = sum_m psi_m Q_m (1D)."""
    if ms.is_2d:
        raise ValueError("2D eigenstates have tensor coefficients; use eval_psi_state")
    return CoeffVector(ms.basis, eig.vectors[:, s])


def eval_psi_state(ms: MomentSet, eig: GeneralizedEig, s: int, x) -> float:
    """Evaluate eigenstate s at a point (pair (x, y) in 2D)."""
    coeffs = eig.vectors[:, s]
    if ms.is_2d:
        nx, ny = ms.n
        qx = evaluate_all(ms.basis, nx, float(x[0]))
        qy = evaluate_all(ms.basis, ny, float(x[1]))
        return float(qx @ coeffs.reshape(nx, ny) @ qy)
    return float(CoeffVector(ms.basis, coeffs)(x))


@dataclass(frozen=True)
class LebesgueHistogram:
    """Value-space bins and their measures.

    Built from a spectrum, mu_i counts the eigenvalues falling in
    [edges[i], edges[i+1]) and the counts total dim G.
    """

    edges: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        if edges.ndim != 1 or mu.ndim != 1 or edges.shape[0] != mu.shape[0] + 1:
            raise ValueError("need len(edges) == len(mu) + 1")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must strictly increase")
        if np.any(mu < 0):
            raise ValueError("bin measures must be nonnegative")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "mu", mu)


def lebesgue_measure(eig: GeneralizedEig, bin_count: int) -> LebesgueHistogram:
    """Count eigenvalues per uniform value-space bin.

    Bins cover [min lambda, max lambda] with the top edge widened by 1e-12
    so the maximum falls inside the last (closed) bin; interior edges follow
    the half-open convention f_i <= lambda < f_{i+1}.
    """
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    lam = np.asarray(eig.values, dtype=float)
    if lam.size == 0:
        raise ValueError("empty spectrum")
    edges = np.linspace(lam.min(), lam.max() + 1e-12, bin_count + 1)
    counts, _ = np.histogram(lam, bins=edges)
    return LebesgueHistogram(edges=edges, mu=counts.astype(float))


def lebesgue_integral(h: LebesgueHistogram, g: FunctionOracle) -> float:
    """sum_i g(f_i) mu_i with f_i the lower edge of bin i."""
    return float(sum(float(g(e)) * m for e, m in zip(h.edges[:-1], h.mu)))


def reconstruct_derivative_1d(
    dms: MomentSet, method: str, x: Union[float, np.ndarray]
):
    """Evaluate a derivative reconstruction from derivative moments.

    ``dms`` must be built from the derivative oracle (moments <Q_k df/dx>);
    the estimators then approximate df/dx itself, so the ratio estimator's
    range bound applies to derivative values, sign included.
    """
    if dms.is_2d:
        raise ValueError("derivative reconstruction is 1D")
    method = _check_method(method)
    r = build_reconstructor(dms)
    xs = np.asarray(x, dtype=float)
    evaluate = eval_ls_grid if method == "ls" else eval_rn_grid
    out = evaluate(r, np.atleast_1d(xs))
    return float(out[0]) if xs.ndim == 0 else out


def differentiate_reconstruction(
    r: Reconstructor, method: str, x: Union[float, np.ndarray], step: float
):
    """Central finite difference of a finished estimator curve.

    Exists to demonstrate the wrong way to get derivatives: differentiating
    the ratio estimator of f disagrees with reconstructing from derivative
    moments.  Prefer reconstruct_derivative_1d in applications.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    method = _check_method(method)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    evaluate = eval_ls_grid if method == "ls" else eval_rn_grid
    out = (evaluate(r, xs + step) - evaluate(r, xs - step)) / (2.0 * step)
    return float(out[0]) if np.ndim(x) == 0 else out
