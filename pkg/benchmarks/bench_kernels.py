"""Timing comparison of the compiled kernel core against the numpy fallback.

Per-kernel micro timings run both backend modules in one process; the
end-to-end rows rerun the image pipeline in subprocesses with
RNMOMENTS_BACKEND forced, so each measurement uses the backend exactly as
import selects it.

Honest summary of what this shows on a typical machine: the compiled loops
win on the recurrence- and pivot-bound kernels (basis tables, Cholesky,
Jacobi sweeps), while the numpy backend wins on the contraction-heavy
kernels (image sums, quadratic forms) because those lower to BLAS GEMM
calls that beat straightforward typed loops. The extension exists to keep
the package self-contained when BLAS threading is restricted; pick with
RNMOMENTS_BACKEND.
"""

import argparse
import subprocess
import sys
import time

import numpy as np

from rnmoments.kernels import available_backends

FAMILY_CHEB = 0


def bench(fn, args, repeat):
    fn(*args)  # warmup / JIT-free correctness touch
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases(rng):
    t = np.linspace(-1.0, 1.0, 16384)
    a = rng.normal(size=(256, 256))
    spd = a @ a.T + 256 * np.eye(256)
    low = np.linalg.cholesky(spd)
    rhs = rng.normal(size=(256, 8))
    sym = rng.normal(size=(100, 100))
    sym = sym + sym.T
    img = rng.uniform(size=(128, 128))
    qx = np.cos(np.outer(np.arange(31), np.arccos(np.linspace(-1, 1, 128))))
    qy = qx.copy()
    m = spd / 256.0
    pts = np.cos(np.outer(np.arange(256) % 16, np.arccos(np.linspace(-1, 1, 4096))))
    m4 = rng.normal(size=(16, 16, 16, 16))
    m4 = m4 + m4.transpose(2, 3, 0, 1)
    qg = np.cos(np.outer(np.arange(16), np.arccos(np.linspace(-1, 1, 128))))
    c2 = rng.normal(size=(16, 16))
    return [
        ("basis_table 16x16384", "basis_table", (FAMILY_CHEB, 16, t)),
        ("cholesky_lower 256", "cholesky_lower", (spd,)),
        ("solve_lower 256x8", "solve_lower", (low, rhs)),
        ("solve_lower_t 256x8", "solve_lower_t", (low, rhs)),
        ("jacobi_eigh 100", "jacobi_eigh", (sym,)),
        ("image_sums 128^2 n=16", "image_sums", (img, qx, qy)),
        ("quadform_points 256x4096", "quadform_points", (m, pts)),
        ("quadform_grid 16^2 128^2", "quadform_grid", (m4, qg, qg)),
        ("bilinear_grid 16^2 128^2", "bilinear_grid", (c2, qg, qg)),
    ]


E2E_SNIPPET = """
import time
import numpy as np
import rnmoments as rn
from rnmoments import kernels
x = np.arange(128) / 127.0
img = rn.GrayImage.from_array(0.2 + 0.6 * np.outer(x, x) + 0.15 * np.sin(4 * x)[None, :] * 0.5 + 0.075)
t0 = time.perf_counter()
ms = rn.MomentSet.from_image(img, rn.CHEBYSHEV_SHIFTED, 16, 16)
rec = rn.build_reconstructor(ms)
res = rn.reconstruct_image(rec, (128, 128), "rn")
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def run_e2e(backend):
    out = subprocess.run(
        [sys.executable, "-c", E2E_SNIPPET],
        capture_output=True,
        text=True,
        env={"RNMOMENTS_BACKEND": backend, "PATH": "/usr/bin:/bin"},
        check=True,
    )
    used, seconds = out.stdout.split()
    assert used == backend, f"subprocess picked {used}, wanted {backend}"
    return float(seconds)


def main():
    parser = argparse.ArgumentParser(description="kernel backend benchmark")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-e2e", action="store_true")
    args = parser.parse_args()

    backends = available_backends()
    names = sorted(backends)
    if len(names) < 2:
        print("note: compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(0)
    width = max(len(label) for label, _, _ in kernel_cases(rng))
    header = f"{'kernel':<{width}}" + "".join(f"  {n:>10}" for n in names)
    print(header)
    print("-" * len(header))
    for label, attr, case_args in kernel_cases(rng):
        row = f"{label:<{width}}"
        for n in names:
            seconds = bench(getattr(backends[n], attr), case_args, args.repeat)
            row += f"  {seconds * 1e3:>8.2f}ms"
        print(row)

    if not args.skip_e2e and len(names) == 2:
        print()
        print("end-to-end 128x128 image, 16x16 basis, ratio reconstruction:")
        for n in names:
            print(f"  RNMOMENTS_BACKEND={n}: {run_e2e(n) * 1e3:.1f}ms")


if __name__ == "__main__":
    main()
