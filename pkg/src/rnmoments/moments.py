"""Measures, vector moments, and the vector-to-matrix moment pipeline.

The central objects are the vector moments <f Q_m> accumulated over a measure
(weighted 1D nodes, or a sum over image pixels) and the matrix moments
F[j,k] = <f Q_j Q_k> assembled from them through product linearization.
For a basis of size N per axis, 2N-1 vector moments (m <= 2N-2) feed every
entry with j,k <= N-1; in 2D the linearization factorizes across axes and the
composite row-major index is j = jx*Ny + jy.
"""

import json
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .basis import BasisKind, evaluate_all, linearization_tensor
from .kernels import image_sums
from .pgm import GrayImage

__all__ = [
    "FunctionOracle",
    "Measure1D",
    "PixelMeasure2D",
    "MomentSet",
    "gauss_legendre_measure",
    "vector_moments_1d",
    "vector_moments_2d",
    "matrix_moments_from_vector",
    "gramm_from_vector",
    "derivative_moments_1d",
]

# Any deterministic point -> value map; may be numpy-vectorized or scalar-only.
FunctionOracle = Callable[..., Union[float, np.ndarray]]


@dataclass(frozen=True)
class Measure1D:
    """Discrete measure: strictly positive weights on real nodes in [a, b]."""

    nodes: np.ndarray
    weights: np.ndarray
    support: tuple = (-1.0, 1.0)

    def __post_init__(self):
        nodes = np.atleast_1d(np.asarray(self.nodes, dtype=float))
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1D of equal length")
        if nodes.size < 1:
            raise ValueError("a measure needs at least one node")
        if not np.all(weights > 0):
            raise ValueError("all weights must be strictly positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class PixelMeasure2D:
    """Unit-weight sum over a dx-by-dy pixel grid.

    Pixel (tx, ty) sits at coordinates (tx/(dx-1), ty/(dy-1)) in [0, 1]^2.
    """

    dx: int
    dy: int

    def __post_init__(self):
        if self.dx < 2 or self.dy < 2:
            raise ValueError("pixel grid needs at least 2 pixels per axis")

    @property
    def x_coords(self) -> np.ndarray:
        return np.arange(self.dx) / (self.dx - 1)

    @property
    def y_coords(self) -> np.ndarray:
        return np.arange(self.dy) / (self.dy - 1)


def gauss_legendre_measure(node_count: int) -> Measure1D:
    """Gauss-Legendre rule on [-1, 1]; exact through degree 2*node_count - 1."""
    if node_count < 1:
        raise ValueError("node_count must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(node_count)
    return Measure1D(nodes, weights, support=(-1.0, 1.0))


def _eval_on_nodes(f: FunctionOracle, nodes: np.ndarray) -> np.ndarray:
    # one evaluation per node: try the vectorized call, fall back to scalar
    try:
        vals = np.asarray(f(nodes), dtype=float)
        if vals.shape == nodes.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(f(x)) for x in nodes])


def vector_moments_1d(
    f: FunctionOracle, mu: Measure1D, basis: BasisKind, count: int
) -> np.ndarray:
    """[<f Q_0>, ..., <f Q_{count-1}>] = sum_i w_i f(x_i) Q_m(x_i)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    table = evaluate_all(basis, count, mu.nodes)
    return table @ (mu.weights * _eval_on_nodes(f, mu.nodes))


def derivative_moments_1d(
    df: FunctionOracle, mu: Measure1D, basis: BasisKind, count: int
) -> np.ndarray:
    """Vector moments of a derivative oracle df/dx; contract as vector_moments_1d.

    Derivative reconstruction must start from these moments; differentiating a
    finished reconstruction is the unreliable path.
    """
    return vector_moments_1d(df, mu, basis, count)


def vector_moments_2d(
    img: GrayImage, basis: BasisKind, mx_max: int, my_max: int
) -> np.ndarray:
    """Pixel-sum moments M[mx, my] = sum f(tx,ty) Q_mx(tx/(dx-1)) Q_my(ty/(dy-1)).

    Accumulated separably via per-row partial sums, O(dx dy max(mx,my))
    instead of the naive O(dx dy mx my).
    """
    if img.width < 1 or img.height < 1 or img.pixels.size == 0:
        raise ValueError("image must be nonempty")
    if mx_max < 1 or my_max < 1:
        raise ValueError("moment counts must be >= 1")
    grid = PixelMeasure2D(img.width, img.height)
    qx = evaluate_all(basis, mx_max, grid.x_coords)
    qy = evaluate_all(basis, my_max, grid.y_coords)
    return image_sums(img.pixels, np.ascontiguousarray(qx), np.ascontiguousarray(qy))


def matrix_moments_from_vector(vec: np.ndarray, basis: BasisKind, n) -> np.ndarray:
    """Assemble F[j,k] = sum_m a^{jk}_m <f Q_m> from vector moments.

    1D: ``vec`` has length >= 2n-1 and the result is n-by-n.  2D: ``vec`` is
    (>=2nx-1, >=2ny-1), ``n`` is (nx, ny) or a single per-axis count, and
    the result is the (nx*ny)-square matrix in composite row-major index
    order.  Symmetric by construction of the linearization tensor.
    """
    vec = np.asarray(vec, dtype=float)
    if vec.ndim == 1:
        n = int(n)
        if vec.shape[0] < 2 * n - 1:
            raise ValueError(f"need {2 * n - 1} vector moments for n={n}, got {vec.shape[0]}")
        a = linearization_tensor(basis, n)
        return np.einsum("jkm,m->jk", a, vec[: 2 * n - 1])
    if vec.ndim == 2:
        nx, ny = (int(n), int(n)) if np.ndim(n) == 0 else (int(n[0]), int(n[1]))
        if vec.shape[0] < 2 * nx - 1 or vec.shape[1] < 2 * ny - 1:
            raise ValueError(
                f"need ({2 * nx - 1}, {2 * ny - 1}) vector moments for n=({nx}, {ny}), "
                f"got {vec.shape}"
            )
        ax = linearization_tensor(basis, nx)
        ay = linearization_tensor(basis, ny)
        v = vec[: 2 * nx - 1, : 2 * ny - 1]
        half = np.einsum("jkm,mp->jkp", ax, v)
        f4 = np.einsum("jkp,abp->jakb", half, ay)
        return f4.reshape(nx * ny, nx * ny)
    raise ValueError("vec must be a 1D or 2D array of moments")


def gramm_from_vector(vec1: np.ndarray, basis: BasisKind, n) -> np.ndarray:
    """Gramm matrix G[j,k] = <Q_j Q_k> from the moments of the constant 1.

    Identical assembly path to matrix_moments_from_vector, so the f==1 case
    of the latter reproduces G exactly.
    """
    return matrix_moments_from_vector(vec1, basis, n)


def _as_json_n(n):
    return list(n) if isinstance(n, tuple) else n


@dataclass(frozen=True)
class MomentSet:
    """Vector and matrix moments of one feature over one measure and basis.

    ``n`` is the per-axis basis size: an int in 1D, an (nx, ny) tuple in 2D.
    ``vec``/``vec1`` hold <f Q_m> and <Q_m> for m <= 2n-2 per axis; ``F`` and
    ``G`` are the assembled matrix moments and Gramm matrix of dimension n
    (1D) or nx*ny (2D).
    """

    basis: BasisKind
    n: Union[int, tuple]
    vec: np.ndarray
    vec1: np.ndarray
    F: np.ndarray
    G: np.ndarray
    measure: object = field(default=None, compare=False, repr=False)

    @property
    def dim(self) -> int:
        return self.n[0] * self.n[1] if isinstance(self.n, tuple) else self.n

    @property
    def is_2d(self) -> bool:
        return isinstance(self.n, tuple)

    @classmethod
    def from_function_1d(
        cls, f: FunctionOracle, mu: Measure1D, basis: BasisKind, n: int
    ) -> "MomentSet":
        """Collect 2n-1 vector moments of f and 1, then assemble F and G."""
        if n < 1:
            raise ValueError("n must be >= 1")
        count = 2 * n - 1
        vec = vector_moments_1d(f, mu, basis, count)
        vec1 = vector_moments_1d(lambda x: np.ones_like(x), mu, basis, count)
        return cls(
            basis=basis,
            n=n,
            vec=vec,
            vec1=vec1,
            F=matrix_moments_from_vector(vec, basis, n),
            G=gramm_from_vector(vec1, basis, n),
            measure=mu,
        )

    @classmethod
    def from_image(cls, img: GrayImage, basis: BasisKind, nx: int, ny: int) -> "MomentSet":
        """Collect (2nx-1)x(2ny-1) pixel moments, then assemble F and G.

        The Gramm vector moments factorize exactly over a full grid, so
        <Q_mx Q_my> is the outer product of the per-axis basis sums.
        """
        if nx < 1 or ny < 1:
            raise ValueError("basis sizes must be >= 1")
        mx, my = 2 * nx - 1, 2 * ny - 1
        vec = vector_moments_2d(img, basis, mx, my)
        grid = PixelMeasure2D(img.width, img.height)
        sx = evaluate_all(basis, mx, grid.x_coords).sum(axis=1)
        sy = evaluate_all(basis, my, grid.y_coords).sum(axis=1)
        vec1 = np.outer(sx, sy)
        return cls(
            basis=basis,
            n=(nx, ny),
            vec=vec,
            vec1=vec1,
            F=matrix_moments_from_vector(vec, basis, (nx, ny)),
            G=gramm_from_vector(vec1, basis, (nx, ny)),
            measure=grid,
        )

    def to_json(self) -> str:
        doc = {
            "basis": self.basis.name,
            "n": _as_json_n(self.n),
            "vec": self.vec.tolist(),
            "vec1": self.vec1.tolist(),
            "F": self.F.tolist(),
            "G": self.G.tolist(),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "MomentSet":
        doc = json.loads(text)
        n = tuple(doc["n"]) if isinstance(doc["n"], list) else int(doc["n"])
        return cls(
            basis=BasisKind.from_name(doc["basis"]),
            n=n,
            vec=np.asarray(doc["vec"], dtype=float),
            vec1=np.asarray(doc["vec1"], dtype=float),
            F=np.asarray(doc["F"], dtype=float),
            G=np.asarray(doc["G"], dtype=float),
        )
