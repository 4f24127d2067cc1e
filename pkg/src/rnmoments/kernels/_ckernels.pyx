# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernel core: tight loops behind the same contracts as py_backend."""

from libc.math cimport sqrt, fabs

import numpy as np


def basis_table(int family, int n, double[::1] t):
    """Rows Q_0(t)..Q_{n-1}(t); family 0=Chebyshev, 1=Legendre."""
    cdef Py_ssize_t npts = t.shape[0]
    out_arr = np.empty((n, npts))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double tk
    for i in range(npts):
        out[0, i] = 1.0
    if n == 1:
        return out_arr
    for i in range(npts):
        out[1, i] = t[i]
    if family == 0:
        for k in range(2, n):
            for i in range(npts):
                out[k, i] = 2.0 * t[i] * out[k - 1, i] - out[k - 2, i]
    else:
        for k in range(2, n):
            for i in range(npts):
                out[k, i] = ((2 * k - 1) * t[i] * out[k - 1, i]
                             - (k - 1) * out[k - 2, i]) / k
    return out_arr


def cholesky_lower(double[:, ::1] a):
    """Lower Cholesky factor; returns (L, pivot) with pivot -1 on success."""
    cdef Py_ssize_t n = a.shape[0]
    l_arr = np.zeros((n, n))
    cdef double[:, ::1] l = l_arr
    cdef Py_ssize_t i, j, k
    cdef double d, s
    for j in range(n):
        d = a[j, j]
        for k in range(j):
            d -= l[j, k] * l[j, k]
        if not d > 0.0:
            return l_arr, j
        s = sqrt(d)
        l[j, j] = s
        for i in range(j + 1, n):
            d = a[i, j]
            for k in range(j):
                d -= l[i, k] * l[j, k]
            l[i, j] = d / s
    return l_arr, -1


def solve_lower(double[:, ::1] l, b):
    """Forward substitution L y = b for (n, k) right-hand sides."""
    cdef Py_ssize_t n = l.shape[0]
    y_arr = np.array(b, dtype=float, copy=True, order="C")
    cdef double[:, ::1] y = y_arr
    cdef Py_ssize_t nrhs = y.shape[1]
    cdef Py_ssize_t i, j, r
    cdef double acc
    for r in range(nrhs):
        for i in range(n):
            acc = y[i, r]
            for j in range(i):
                acc -= l[i, j] * y[j, r]
            y[i, r] = acc / l[i, i]
    return y_arr


def solve_lower_t(double[:, ::1] l, b):
    """Back substitution L^T x = b for (n, k) right-hand sides."""
    cdef Py_ssize_t n = l.shape[0]
    x_arr = np.array(b, dtype=float, copy=True, order="C")
    cdef double[:, ::1] x = x_arr
    cdef Py_ssize_t nrhs = x.shape[1]
    cdef Py_ssize_t i, j, r
    cdef double acc
    for r in range(nrhs):
        for i in range(n - 1, -1, -1):
            acc = x[i, r]
            for j in range(i + 1, n):
                acc -= l[j, i] * x[j, r]
            x[i, r] = acc / l[i, i]
    return x_arr


cdef double _offdiag_norm(double[:, ::1] c) nogil:
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += c[i, j] * c[i, j]
    return sqrt(s)


def jacobi_eigh(c_in, double tol_factor=1e-12, int max_sweeps=30):
    """Cyclic Jacobi diagonalization; returns (eigenvalues, U, converged)."""
    c_arr = np.array(c_in, dtype=float, copy=True, order="C")
    cdef double[:, ::1] c = c_arr
    cdef Py_ssize_t n = c.shape[0]
    u_arr = np.eye(n)
    cdef double[:, ::1] u = u_arr
    cdef Py_ssize_t p, q, i, sweep
    cdef double apq, theta, th2, t, cs, sn, tmp_p, tmp_q
    cdef double fro = 0.0
    for p in range(n):
        for q in range(n):
            fro += c[p, q] * c[p, q]
    cdef double tol = tol_factor * sqrt(fro)
    cdef bint converged = False
    for sweep in range(max_sweeps):
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
                if th2 != th2 or th2 + 1.0 == th2:
                    # theta overflowed: rotation is asymptotically 1/(2 theta)
                    t = 0.5 / theta
                elif theta == 0.0:
                    t = 1.0
                elif theta > 0.0:
                    t = 1.0 / (theta + sqrt(1.0 + th2))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + th2))
                cs = 1.0 / sqrt(1.0 + t * t)
                sn = t * cs
                for i in range(n):
                    tmp_p = c[i, p]
                    tmp_q = c[i, q]
                    c[i, p] = cs * tmp_p - sn * tmp_q
                    c[i, q] = sn * tmp_p + cs * tmp_q
                for i in range(n):
                    tmp_p = c[p, i]
                    tmp_q = c[q, i]
                    c[p, i] = cs * tmp_p - sn * tmp_q
                    c[q, i] = sn * tmp_p + cs * tmp_q
                c[p, q] = 0.0
                c[q, p] = 0.0
                for i in range(n):
                    tmp_p = u[i, p]
                    tmp_q = u[i, q]
                    u[i, p] = cs * tmp_p - sn * tmp_q
                    u[i, q] = sn * tmp_p + cs * tmp_q
    if not converged:
        converged = _offdiag_norm(c) <= tol
    return np.diag(c_arr).copy(), u_arr, converged


def image_sums(double[:, ::1] img, double[:, ::1] qx, double[:, ::1] qy):
    """M[mx, my] = sum_{ty,tx} img[ty,tx] qx[mx,tx] qy[my,ty] via per-row partials."""
    cdef Py_ssize_t dy = img.shape[0]
    cdef Py_ssize_t dx = img.shape[1]
    cdef Py_ssize_t mx = qx.shape[0]
    cdef Py_ssize_t my = qy.shape[0]
    out_arr = np.zeros((mx, my))
    cdef double[:, ::1] out = out_arr
    row_arr = np.empty(mx)
    cdef double[::1] row = row_arr
    cdef Py_ssize_t ty, tx, a, b
    cdef double acc, w
    for ty in range(dy):
        for a in range(mx):
            acc = 0.0
            for tx in range(dx):
                acc += img[ty, tx] * qx[a, tx]
            row[a] = acc
        for b in range(my):
            w = qy[b, ty]
            for a in range(mx):
                out[a, b] += w * row[a]
    return out_arr


def quadform_points(double[:, ::1] m, double[:, ::1] q):
    """out[t] = q[:,t]^T M q[:,t] for column stack q (n, npts)."""
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t npts = q.shape[1]
    out_arr = np.empty(npts)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t t, j, k
    cdef double acc, inner
    for t in range(npts):
        acc = 0.0
        for j in range(n):
            inner = 0.0
            for k in range(n):
                inner += m[j, k] * q[k, t]
            acc += q[j, t] * inner
        out[t] = acc
    return out_arr


def quadform_grid(double[:, :, :, ::1] m4, double[:, ::1] qx, double[:, ::1] qy):
    """Per-pixel quadratic form for separable q = qx[:,tx] (x) qy[:,ty]."""
    cdef Py_ssize_t nx = m4.shape[0]
    cdef Py_ssize_t ny = m4.shape[1]
    cdef Py_ssize_t dx = qx.shape[1]
    cdef Py_ssize_t dy = qy.shape[1]
    out_arr = np.empty((dy, dx))
    cdef double[:, ::1] out = out_arr
    tab_arr = np.empty((ny, ny))
    cdef double[:, ::1] tab = tab_arr
    cdef Py_ssize_t tx, ty, a, b, jx, kx
    cdef double acc, inner, w
    for tx in range(dx):
        # tab[a, b] = sum_{jx,kx} qx[jx,tx] m4[jx,a,kx,b] qx[kx,tx]
        for a in range(ny):
            for b in range(ny):
                acc = 0.0
                for jx in range(nx):
                    w = qx[jx, tx]
                    inner = 0.0
                    for kx in range(nx):
                        inner += m4[jx, a, kx, b] * qx[kx, tx]
                    acc += w * inner
                tab[a, b] = acc
        for ty in range(dy):
            acc = 0.0
            for a in range(ny):
                inner = 0.0
                for b in range(ny):
                    inner += tab[a, b] * qy[b, ty]
                acc += qy[a, ty] * inner
            out[ty, tx] = acc
    return out_arr


def bilinear_grid(double[:, ::1] c2, double[:, ::1] qx, double[:, ::1] qy):
    """out[ty, tx] = sum_{jx,jy} c2[jx,jy] qx[jx,tx] qy[jy,ty]."""
    cdef Py_ssize_t nx = c2.shape[0]
    cdef Py_ssize_t ny = c2.shape[1]
    cdef Py_ssize_t dx = qx.shape[1]
    cdef Py_ssize_t dy = qy.shape[1]
    out_arr = np.empty((dy, dx))
    cdef double[:, ::1] out = out_arr
    tmp_arr = np.empty(ny)
    cdef double[::1] tmp = tmp_arr
    cdef Py_ssize_t tx, ty, jx, jy
    cdef double acc
    for tx in range(dx):
        for jy in range(ny):
            acc = 0.0
            for jx in range(nx):
                acc += c2[jx, jy] * qx[jx, tx]
            tmp[jy] = acc
        for ty in range(dy):
            acc = 0.0
            for jy in range(ny):
                acc += tmp[jy] * qy[jy, ty]
            out[ty, tx] = acc
    return out_arr
