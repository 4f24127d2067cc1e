"""Acceptance gate.

One test per release criterion, numbered; the terminal summary hook in
conftest prints a pass/fail line for each. Tolerances are fixed here and
the magnitude claims were frozen from independent dense-solve oracle runs
before these tests were written.
"""

import time
import warnings

import numpy as np
import pytest

import rnmoments as rn
from conftest import gradient_image, runge

GRID = np.linspace(-1.5, 1.5, 1001)


def dense_estimators(f, measure, kind, n):
    """Independent route to both estimators: accumulate the matrix moments
    node by node (no product linearization) and use explicit inverses."""
    q = rn.evaluate_all(kind, n, measure.nodes)
    fw = measure.weights * f(measure.nodes)
    g = (q * measure.weights) @ q.T
    fmat = (q * fw) @ q.T
    g_inv = np.linalg.inv(g)
    ls = np.linalg.solve(g, q @ fw)
    m = g_inv @ fmat @ g_inv

    def a_ls(x):
        t = rn.evaluate_all(kind, n, np.asarray(x, dtype=float))
        return ls @ t

    def a_rn(x):
        t = rn.evaluate_all(kind, n, np.asarray(x, dtype=float))
        return np.einsum("jt,jk,kt->t", t, m, t) / np.einsum(
            "jt,jk,kt->t", t, g_inv, t
        )

    return a_ls, a_rn


def test_criterion_01_constant_fidelity(gauss1000):
    t0 = time.perf_counter()
    c = 0.625
    ms = rn.MomentSet.from_function_1d(lambda x: c, gauss1000, rn.CHEBYSHEV, 7)
    rec = rn.build_reconstructor(ms)
    assert np.abs(rn.eval_ls_grid(rec, GRID) - c).max() <= 1e-9
    assert np.abs(rn.eval_rn_grid(rec, GRID) - c).max() <= 1e-9

    img = rn.GrayImage.constant(16, 16, c)
    ms2 = rn.MomentSet.from_image(img, rn.CHEBYSHEV_SHIFTED, 4, 4)
    rec2 = rn.build_reconstructor(ms2)
    t = np.linspace(0.0, 1.0, 1001)
    ls_sweep = np.array([rn.eval_ls(rec2, (u, u)) for u in t])
    rn_sweep = np.array([rn.eval_rn(rec2, (u, u)) for u in t])
    assert np.abs(ls_sweep - c).max() <= 1e-9
    assert np.abs(rn_sweep - c).max() <= 1e-9
    for method in ("ls", "rn"):
        res = rn.reconstruct_image(rec2, (16, 16), method)
        assert abs(res.pre_clamp_min - c) <= 1e-9
        assert abs(res.pre_clamp_max - c) <= 1e-9
    assert time.perf_counter() - t0 < 1.0


def test_criterion_02_ratio_estimator_boundedness(runge_ms):
    t0 = time.perf_counter()
    rec = rn.build_reconstructor(runge_ms)
    vals = rn.eval_rn_grid(rec, GRID)
    assert vals.min() >= 1 / 26 - 1e-9
    assert vals.max() <= 1 + 1e-9
    far_rn = rn.eval_rn(rec, 3.0)
    assert 1 / 26 - 1e-9 <= far_rn <= 1 + 1e-9
    assert abs(rn.eval_ls(rec, 3.0)) > 1
    assert time.perf_counter() - t0 < 1.0


def test_criterion_03_boundary_oscillation_ordering(runge_ms, gauss1000):
    rec = rn.build_reconstructor(runge_ms)
    band = GRID[(np.abs(GRID) >= 0.9) & (np.abs(GRID) <= 1.0)]
    f_band = runge(band)
    err_ls = np.abs(rn.eval_ls_grid(rec, band) - f_band).max()
    err_rn = np.abs(rn.eval_rn_grid(rec, band) - f_band).max()
    assert err_rn < err_ls

    a_ls, a_rn = dense_estimators(runge, gauss1000, rn.CHEBYSHEV, 7)
    ref_ls = np.abs(a_ls(band) - f_band).max()
    ref_rn = np.abs(a_rn(band) - f_band).max()
    assert err_ls == pytest.approx(ref_ls, abs=1e-9)
    assert err_rn == pytest.approx(ref_rn, abs=1e-9)


def test_criterion_04_least_squares_span_exactness(gauss1000):
    f = lambda x: rn.evaluate_all(rn.LEGENDRE, 4, x)[3]
    ms = rn.MomentSet.from_function_1d(f, gauss1000, rn.CHEBYSHEV, 7)
    rec = rn.build_reconstructor(ms)
    xs = np.linspace(-1.0, 1.0, 1001)
    assert np.abs(rn.eval_ls_grid(rec, xs) - f(xs)).max() <= 1e-8


def test_criterion_05_derivative_path_correctness(gauss1000):
    xs = np.linspace(-1.0, 1.0, 1001)
    target = 3.0 * xs * xs
    dms = rn.MomentSet.from_function_1d(lambda x: 3 * x * x, gauss1000, rn.CHEBYSHEV, 4)
    moments_route = rn.reconstruct_derivative_1d(dms, "ls", xs)
    assert np.abs(moments_route - target).max() <= 1e-8

    ms = rn.MomentSet.from_function_1d(lambda x: x**3, gauss1000, rn.CHEBYSHEV, 4)
    rec = rn.build_reconstructor(ms)
    numeric_route = rn.differentiate_reconstruction(rec, "rn", xs, 1e-5)
    assert np.abs(numeric_route - target).max() > 1e-3


def test_criterion_06_sign_preservation():
    rng = np.random.default_rng(1234)
    ls_violations = 0
    for _ in range(50):
        raw = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        img = rn.GrayImage.from_array(raw / 255.0)
        ms = rn.MomentSet.from_image(img, rn.CHEBYSHEV_SHIFTED, 6, 6)
        rec = rn.build_reconstructor(ms)
        res_rn = rn.reconstruct_image(rec, (32, 32), "rn")
        assert res_rn.pre_clamp_min >= -1e-9
        res_ls = rn.reconstruct_image(rec, (32, 32), "ls")
        if res_ls.pre_clamp_min < -1e-9 or res_ls.pre_clamp_max > 1 + 1e-9:
            ls_violations += 1
    if ls_violations == 0:
        warnings.warn(
            "least squares stayed inside [0,1] on all 50 images; the usual "
            "overshoot did not appear, investigate the sampling"
        )


def test_criterion_07_cross_basis_byte_equivalence():
    img = gradient_image(64)
    outputs = {}
    for kind in (rn.CHEBYSHEV_SHIFTED, rn.LEGENDRE_SHIFTED):
        ms = rn.MomentSet.from_image(img, kind, 8, 8)
        rec = rn.build_reconstructor(ms)
        outputs[kind.family] = {
            m: rn.write_pgm(rn.reconstruct_image(rec, (64, 64), m).image)
            for m in ("ls", "rn")
        }
    for m in ("ls", "rn"):
        assert outputs["chebyshev"][m] == outputs["legendre"][m]


@pytest.mark.slow
def test_criterion_07_cross_basis_large():
    t0 = time.perf_counter()
    img = gradient_image(256)
    outputs = {}
    for kind in (rn.CHEBYSHEV_SHIFTED, rn.LEGENDRE_SHIFTED):
        ms = rn.MomentSet.from_image(img, kind, 16, 16)
        rec = rn.build_reconstructor(ms)
        outputs[kind.family] = {
            m: rn.write_pgm(rn.reconstruct_image(rec, (256, 256), m).image)
            for m in ("ls", "rn")
        }
    for m in ("ls", "rn"):
        assert outputs["chebyshev"][m] == outputs["legendre"][m]
    assert time.perf_counter() - t0 < 30.0


def test_criterion_08_spectral_identities(random_image_16):
    ms = rn.MomentSet.from_image(random_image_16, rn.CHEBYSHEV_SHIFTED, 4, 4)
    eig = rn.natural_basis(ms)
    assert abs(rn.spur_average(ms) - eig.values.mean()) <= 1e-9
    gram = eig.vectors.T @ ms.G @ eig.vectors
    assert np.abs(gram - np.eye(16)).max() <= 1e-8
    diag = eig.vectors.T @ ms.F @ eig.vectors
    assert np.abs(diag - np.diag(eig.values)).max() <= 1e-8
    lo = random_image_16.pixels.min()
    hi = random_image_16.pixels.max()
    assert eig.values.min() >= lo - 1e-9
    assert eig.values.max() <= hi + 1e-9


def test_criterion_09_eigenvalue_count_totals(runge_ms, random_image_16):
    spectra = []
    spectra.append((rn.natural_basis(runge_ms), runge_ms.dim))
    ms = rn.MomentSet.from_image(random_image_16, rn.CHEBYSHEV_SHIFTED, 4, 4)
    spectra.append((rn.natural_basis(ms), ms.dim))
    rng = np.random.default_rng(17)
    fake = rn.GeneralizedEig(values=np.sort(rng.normal(size=23)), vectors=np.eye(23))
    spectra.append((fake, 23))
    for eig, dim in spectra:
        for bins in (1, 2, 5, 16):
            h = rn.lebesgue_measure(eig, bins)
            assert h.mu.sum() == float(dim)
            assert rn.lebesgue_integral(h, lambda v: 1.0) == float(dim)


def test_criterion_10_scale_check():
    t0 = time.perf_counter()
    img = gradient_image(128)
    ms = rn.MomentSet.from_image(img, rn.CHEBYSHEV_SHIFTED, 16, 16)
    rec = rn.build_reconstructor(ms)
    res = rn.reconstruct_image(rec, (128, 128), "rn")
    elapsed = time.perf_counter() - t0
    assert res.values.shape == (128, 128)
    assert res.pre_clamp_min >= img.pixels.min() - 1e-9
    assert res.pre_clamp_max <= img.pixels.max() + 1e-9
    assert elapsed < 60.0
