"""Orthogonal polynomial families: evaluation and in-basis product linearization.

Two families are supported, Chebyshev (first kind) and Legendre, each either on
their native [-1, 1] interval or shifted to [0, 1] via Q_k(x) = P_k(2x - 1).
Products Q_j*Q_k are re-expanded in the same basis ("linearization"), which is
what lets matrix moments <f Q_j Q_k> be assembled from 2N-1 vector moments
without ever leaving the basis.  Monomial detours are deliberately absent: they
are the classic way to destroy conditioning at high order.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import basis_table

__all__ = [
    "BasisKind",
    "CHEBYSHEV",
    "LEGENDRE",
    "CHEBYSHEV_SHIFTED",
    "LEGENDRE_SHIFTED",
    "CoeffVector",
    "evaluate_all",
    "linearize_product",
    "linearization_tensor",
    "evaluate_coeffvector",
]

_FAMILIES = ("chebyshev", "legendre")
_FAMILY_CODE = {"chebyshev": 0, "legendre": 1}


@dataclass(frozen=True)
class BasisKind:
    """A polynomial family plus its domain map.

    ``shifted=False`` evaluates on the native [-1, 1] interval;
    ``shifted=True`` uses Q_k(x) = P_k(2x - 1), i.e. the family shifted
    to [0, 1] (the convention for pixel grids).
    """

    family: str
    shifted: bool = False

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown basis family {self.family!r}")

    @property
    def name(self) -> str:
        return self.family + ("_shifted" if self.shifted else "")

    @classmethod
    def from_name(cls, name: str) -> "BasisKind":
        family, _, tail = name.partition("_")
        if tail not in ("", "shifted"):
            raise ValueError(f"unknown basis name {name!r}")
        return cls(family, shifted=(tail == "shifted"))

    def map_points(self, x):
        """Map evaluation points into the family's native argument."""
        x = np.asarray(x, dtype=float)
        return 2.0 * x - 1.0 if self.shifted else x


CHEBYSHEV = BasisKind("chebyshev")
LEGENDRE = BasisKind("legendre")
CHEBYSHEV_SHIFTED = BasisKind("chebyshev", shifted=True)
LEGENDRE_SHIFTED = BasisKind("legendre", shifted=True)


@dataclass(frozen=True)
class CoeffVector:
    """Coefficients c_0..c_{M-1} of an expansion sum_k c_k Q_k(x).

    Trailing zeros are permitted; the length is the declared degree bound.
    """

    basis: BasisKind
    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if arr.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        object.__setattr__(self, "coeffs", arr)

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    def __call__(self, x):
        return evaluate_coeffvector(self, x)


def evaluate_all(kind: BasisKind, n: int, x) -> np.ndarray:
    """Evaluate [Q_0(x), ..., Q_{n-1}(x)] by the three-term recurrence.

    ``x`` may be a scalar or an array; the result has shape (n,) + x.shape.
    Evaluation outside the support interval is allowed (the recurrences
    stay exact polynomials everywhere).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    t = np.atleast_1d(kind.map_points(x))
    scalar = np.isscalar(x) or np.ndim(x) == 0
    table = basis_table(_FAMILY_CODE[kind.family], n, np.ascontiguousarray(t.ravel()))
    table = table.reshape((n,) + t.shape)
    return table[:, 0] if scalar else table


def linearize_product(kind: BasisKind, j: int, k: int) -> CoeffVector:
    """Expand Q_j*Q_k = sum_m a_m Q_m in the same basis.

    Chebyshev: T_j T_k = (T_{j+k} + T_{|j-k|}) / 2, so at most two nonzero
    entries whose values never exceed 1 at any order.  Legendre uses the
    Adams/Neumann linearization, whose coefficients are positive and sum
    to 1.  Returned length is j + k + 1.
    """
    if j < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    coeffs = np.zeros(j + k + 1)
    if kind.family == "chebyshev":
        coeffs[j + k] += 0.5
        coeffs[abs(j - k)] += 0.5
    else:
        _legendre_product_into(j, k, coeffs)
    return CoeffVector(kind, coeffs)


def _adams_prefactors(r_max: int) -> np.ndarray:
    # A_r = (2r)! / (2^r (r!)^2), via A_r = A_{r-1} (2r-1)/r.  Finite in
    # float64 up to r ~ 1020, far beyond desk-scale basis sizes.
    a = np.empty(r_max + 1)
    a[0] = 1.0
    for r in range(1, r_max + 1):
        a[r] = a[r - 1] * (2 * r - 1) / r
    return a


def _legendre_product_into(j: int, k: int, out: np.ndarray) -> None:
    # P_j P_k = sum_{s=0}^{min(j,k)} c_s P_{j+k-2s} with
    # c_s = (2(j+k-2s)+1)/(2(j+k-s)+1) * A_s A_{j-s} A_{k-s} / A_{j+k-s}.
    a = _adams_prefactors(j + k)
    for s in range(min(j, k) + 1):
        c = (
            (2 * (j + k - 2 * s) + 1)
            / (2 * (j + k - s) + 1)
            * a[s]
            * a[j - s]
            * a[k - s]
            / a[j + k - s]
        )
        out[j + k - 2 * s] = c


@lru_cache(maxsize=32)
def linearization_tensor(kind: BasisKind, n: int) -> np.ndarray:
    """Tensor A[j, k, m] with Q_j Q_k = sum_m A[j,k,m] Q_m, for j,k < n.

    Shape (n, n, 2n-1); symmetric in (j, k).  The domain shift does not
    change linearization coefficients, only the argument map.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = np.zeros((n, n, 2 * n - 1))
    for j in range(n):
        for k in range(j + 1):
            v = linearize_product(kind, j, k).coeffs
            a[j, k, : v.shape[0]] = v
            a[k, j, : v.shape[0]] = v
    a.setflags(write=False)
    return a


def evaluate_coeffvector(v: CoeffVector, x):
    """Evaluate sum_k c_k Q_k(x) by Clenshaw backward recurrence."""
    t = v.basis.map_points(x)
    scalar = t.ndim == 0
    c = v.coeffs
    n = c.shape[0] - 1
    if n == 0:
        out = np.full_like(t, c[0], dtype=float)
    elif v.basis.family == "chebyshev":
        b1 = np.zeros_like(t, dtype=float)
        b2 = np.zeros_like(t, dtype=float)
        for k in range(n, 0, -1):
            b1, b2 = c[k] + 2.0 * t * b1 - b2, b1
        out = c[0] + t * b1 - b2
    else:
        # Legendre: P_{k+1} = ((2k+1) t P_k - k P_{k-1})/(k+1), so the
        # Clenshaw weights are alpha_k = (2k+1)t/(k+1), beta_k = -k/(k+1).
        b1 = np.zeros_like(t, dtype=float)
        b2 = np.zeros_like(t, dtype=float)
        for k in range(n, 0, -1):
            alpha = (2 * k + 1) / (k + 1) * t
            beta_next = -(k + 1) / (k + 2)
            b1, b2 = c[k] + alpha * b1 + beta_next * b2, b1
        out = c[0] + t * b1 - 0.5 * b2
    return float(out) if scalar else out
