"""Dense SPD factorization and the generalized symmetric-definite eigenproblem.

The Gramm matrix inverse is never formed blindly: G = L L^T is factorized and
applied through triangular solves, and a failed pivot is surfaced with its
index (the usual sign that the basis is too large for the measure's support,
or that a poorly conditioned basis was chosen).  F psi = lambda G psi is
reduced to standard form C = L^{-1} F L^{-T} and diagonalized by cyclic
Jacobi rotations, which keeps eigenvector orthogonality tight at desk-scale
dimensions.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "NotPositiveDefiniteError",
    "EigenConvergenceError",
    "SpdFactor",
    "GeneralizedEig",
    "cholesky",
    "spd_solve",
    "generalized_sym_eig",
]


class NotPositiveDefiniteError(ArithmeticError):
    """Cholesky hit a non-positive pivot; carries the pivot index."""

    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(
            f"matrix is not positive definite (pivot {pivot}); "
            "the basis may be too large for the measure's support"
        )


class EigenConvergenceError(ArithmeticError):
    """Jacobi sweeps failed to reach the off-diagonal tolerance."""


_SYMMETRY_RTOL = 1e-8


def _require_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = float(np.max(np.abs(a))) or 1.0
    if float(np.max(np.abs(a - a.T))) > _SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    return a


@dataclass(frozen=True)
class SpdFactor:
    """Lower Cholesky factor L with G = L L^T; diag(L) strictly positive."""

    L: np.ndarray

    @property
    def dim(self) -> int:
        return self.L.shape[0]


@dataclass(frozen=True)
class GeneralizedEig:
    """Eigenpairs of F psi = lambda G psi.

    ``values`` ascend; column s of ``vectors`` is psi^(s), normalized to
    psi^T G psi = 1 with its largest-magnitude coefficient positive.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def cholesky(g: np.ndarray) -> SpdFactor:
    """Factor a symmetric positive definite matrix as L L^T.

    Raises NotPositiveDefiniteError (with the offending pivot index) instead
    of regularizing: a failure here is diagnostic, not noise to paper over.
    """
    g = _require_symmetric(g)
    l, pivot = kernels.cholesky_lower(g)
    if pivot >= 0:
        raise NotPositiveDefiniteError(pivot)
    return SpdFactor(L=l)


def spd_solve(fac: SpdFactor, b: np.ndarray) -> np.ndarray:
    """Solve G x = b through the factor (forward then back substitution).

    ``b`` may be a vector or a matrix of column right-hand sides.
    """
    b = np.asarray(b, dtype=float)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if b.ndim != 2 or b.shape[0] != fac.dim:
        raise ValueError(f"right-hand side shape {b.shape} does not match dim {fac.dim}")
    y = kernels.solve_lower(fac.L, np.ascontiguousarray(b))
    x = kernels.solve_lower_t(fac.L, y)
    return x[:, 0] if vector else x


def generalized_sym_eig(
    f: np.ndarray, g_fac: SpdFactor, *, max_sweeps: int = 30, tol_factor: float = 1e-12
) -> GeneralizedEig:
    """Solve F psi = lambda G psi via Cholesky reduction plus cyclic Jacobi.

    C = L^{-1} F L^{-T} is diagonalized to off-diagonal Frobenius norm
    <= tol_factor * ||C||_F, eigenvectors are back-transformed through
    psi = L^{-T} u, sorted ascending by eigenvalue (stable on ties), and
    sign-fixed so the largest-magnitude coefficient is positive.
    """
    f = _require_symmetric(f)
    if f.shape[0] != g_fac.dim:
        raise ValueError(f"F dimension {f.shape[0]} does not match factor {g_fac.dim}")
    y = kernels.solve_lower(g_fac.L, f)
    c = kernels.solve_lower(g_fac.L, np.ascontiguousarray(y.T))
    c = 0.5 * (c + c.T)
    w, u, converged = kernels.jacobi_eigh(c, tol_factor, max_sweeps)
    if not converged:
        raise EigenConvergenceError(
            f"Jacobi rotations did not converge within {max_sweeps} sweeps"
        )
    psi = kernels.solve_lower_t(g_fac.L, u)
    order = np.argsort(w, kind="stable")
    w = w[order]
    psi = psi[:, order]
    # psi^T G psi = u^T u = I up to roundoff; renormalize and fix signs anyway
    norms = np.linalg.norm(g_fac.L.T @ psi, axis=0)
    psi = psi / norms
    lead = np.argmax(np.abs(psi), axis=0)
    signs = np.sign(psi[lead, np.arange(psi.shape[1])])
    signs[signs == 0] = 1.0
    return GeneralizedEig(values=w, vectors=psi * signs)
