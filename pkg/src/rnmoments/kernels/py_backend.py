"""Pure-numpy reference implementations of the hot kernels.

Same contracts as the compiled core in ``_ckernels``; the accumulation
kernels lean on BLAS matmul while the factorization/rotation kernels are
python loops over vectorized rows.  Selected automatically when the
extension is not built (see ``kernels.__init__``).
"""

import numpy as np

__all__ = [
    "basis_table",
    "cholesky_lower",
    "solve_lower",
    "solve_lower_t",
    "jacobi_eigh",
    "image_sums",
    "quadform_points",
    "quadform_grid",
    "bilinear_grid",
]


def basis_table(family: int, n: int, t: np.ndarray) -> np.ndarray:
    """Rows Q_0(t)..Q_{n-1}(t) by three-term recurrence; family 0=Chebyshev, 1=Legendre."""
    t = np.asarray(t, dtype=float)
    out = np.empty((n, t.shape[0]))
    out[0] = 1.0
    if n == 1:
        return out
    out[1] = t
    if family == 0:
        for k in range(2, n):
            out[k] = 2.0 * t * out[k - 1] - out[k - 2]
    else:
        for k in range(2, n):
            out[k] = ((2 * k - 1) * t * out[k - 1] - (k - 1) * out[k - 2]) / k
    return out


def cholesky_lower(a: np.ndarray):
    """Lower Cholesky factor of a symmetric matrix.

    Returns (L, pivot); pivot is -1 on success, else the index of the
    first non-positive (or non-finite) pivot, with L undefined.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        d = a[j, j] - L[j, :j] @ L[j, :j]
        if not d > 0.0:
            return L, j
        s = np.sqrt(d)
        L[j, j] = s
        if j + 1 < n:
            L[j + 1 :, j] = (a[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / s
    return L, -1


def solve_lower(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Forward substitution: solve L y = b for lower-triangular L; b is (n, k)."""
    n = L.shape[0]
    y = np.array(b, dtype=float, copy=True)
    for i in range(n):
        if i:
            y[i] -= L[i, :i] @ y[:i]
        y[i] /= L[i, i]
    return y


def solve_lower_t(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Back substitution: solve L^T x = b; b is (n, k)."""
    n = L.shape[0]
    x = np.array(b, dtype=float, copy=True)
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= L[i + 1 :, i] @ x[i + 1 :]
        x[i] /= L[i, i]
    return x


def _offdiag_norm(c: np.ndarray) -> float:
    d = c - np.diag(np.diag(c))
    return float(np.sqrt(np.sum(d * d)))


def jacobi_eigh(c: np.ndarray, tol_factor: float = 1e-12, max_sweeps: int = 30):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues, eigenvector columns, converged).  Convergence:
    off-diagonal Frobenius norm <= tol_factor * ||C||_F (norm taken from
    the input matrix; it is rotation-invariant).
    """
    c = np.array(c, dtype=float, copy=True)
    n = c.shape[0]
    u = np.eye(n)
    tol = tol_factor * float(np.sqrt(np.sum(c * c)))
    converged = False
    for _ in range(max_sweeps):
        if _offdiag_norm(c) <= tol:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = c[p, q]
                if apq == 0.0:
                    continue
                theta = (c[q, q] - c[p, p]) / (2.0 * apq)
                th2 = theta * theta
                if np.isinf(th2):
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(1.0 + th2)) if theta else 1.0
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * cs
                cp = c[:, p].copy()
                cq = c[:, q].copy()
                c[:, p] = cs * cp - sn * cq
                c[:, q] = sn * cp + cs * cq
                rp = c[p, :].copy()
                rq = c[q, :].copy()
                c[p, :] = cs * rp - sn * rq
                c[q, :] = sn * rp + cs * rq
                c[p, q] = 0.0
                c[q, p] = 0.0
                up = u[:, p].copy()
                uq = u[:, q].copy()
                u[:, p] = cs * up - sn * uq
                u[:, q] = sn * up + cs * uq
    else:
        converged = _offdiag_norm(c) <= tol
    return np.diag(c).copy(), u, converged


def image_sums(img: np.ndarray, qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
    """Moments M[mx, my] = sum_{ty,tx} img[ty,tx] qx[mx,tx] qy[my,ty].

    img is (dy, dx); qx is (mx_max, dx); qy is (my_max, dy).
    """
    return (qx @ img.T) @ qy.T


def quadform_points(m: np.ndarray, q: np.ndarray) -> np.ndarray:
    """out[t] = q[:,t]^T M q[:,t] for a stack of column vectors q (n, npts)."""
    return np.einsum("jt,jt->t", q, m @ q)


def quadform_grid(m4: np.ndarray, qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
    """Per-pixel quadratic form of a separable vector stack.

    m4 is (nx, ny, nx, ny); qx is (nx, dx); qy is (ny, dy).  Returns
    out[ty, tx] = sum q_{jx,jy} M q_{kx,ky} with q = qx[:,tx] (x) qy[:,ty].
    """
    # contract the x-indices first: txab = sum_{jx,kx} qx[jx,t] m4[jx,a,kx,b] qx[kx,t]
    txab = np.einsum("jt,jakb,kt->tab", qx, m4, qx, optimize=True)
    return np.einsum("as,tab,bs->st", qy, txab, qy, optimize=True)


def bilinear_grid(c2: np.ndarray, qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
    """out[ty, tx] = sum_{jx,jy} c2[jx,jy] qx[jx,tx] qy[jy,ty]."""
    return (qx.T @ c2 @ qy).T
