import math

import numpy as np
import pytest

from poissonrd.blahut import (
    ConvergenceError, DiscretizedSource, bernoulli, blahut_arimoto, discretize_exponential,
    discretize_laplacian, distortion_matrix, rate_at_distortion,
)


def test_source_validation():
    with pytest.raises(ValueError):
        DiscretizedSource([0.0, 1.0], [0.5, 0.6], "l1")
    with pytest.raises(ValueError):
        DiscretizedSource([0.0, 1.0], [1.5, -0.5], "l1")
    with pytest.raises(ValueError):
        DiscretizedSource([0.0], [1.0], "squared")
    src = discretize_laplacian()
    assert len(src.support) == 1601 and abs(src.pmf.sum() - 1) <= 1e-12
    assert len(discretize_exponential().support) == 1201


def test_one_sided_matrix_forbids_overshoot():
    d = distortion_matrix(discretize_exponential(2.0, truncation=1.0, step=0.5))
    assert np.isinf(d[0, 1]) and d[1, 0] == pytest.approx(1.0) and d[2, 2] == 0


def test_bernoulli_lossless_endpoint():
    p = blahut_arimoto(bernoulli(0.5), slope=40.0)
    assert p.rate == pytest.approx(1.0, abs=1e-9)
    assert p.distortion == pytest.approx(0.0, abs=1e-9)


def test_bernoulli_matches_binary_entropy_oracle():
    # R(D) = 1 - h(D) for a fair bit under Hamming distortion
    for D in (0.1, 0.25):
        p = rate_at_distortion(bernoulli(0.5), D, tol_D=1e-7)
        h = -D * math.log2(D) - (1 - D) * math.log2(1 - D)
        assert p.rate == pytest.approx(1 - h, abs=1e-5)


def test_laplacian_half_distortion():
    p = rate_at_distortion(discretize_laplacian(1.0), 0.5)
    assert abs(p.distortion - 0.5) <= 1e-4
    assert p.rate == pytest.approx(1.0, abs=0.05)


def test_exponential_half_distortion():
    p = rate_at_distortion(discretize_exponential(1.0), 0.5)
    assert abs(p.distortion - 0.5) <= 1e-4
    assert p.rate == pytest.approx(1.0, abs=0.05)


def test_zero_rate_beyond_dmax():
    src = discretize_exponential(1.0, step=0.05)
    assert rate_at_distortion(src, 1.2).rate <= 1e-3


def test_monotone_along_slope():
    src = discretize_laplacian(1.0, step=0.05)
    pts = [blahut_arimoto(src, slope=s) for s in (8.0, 4.0, 2.0, 1.5, 1.2)]
    Ds = [p.distortion for p in pts]
    Rs = [p.rate for p in pts]
    assert all(a <= b for a, b in zip(Ds, Ds[1:]))
    assert all(a >= b for a, b in zip(Rs, Rs[1:]))


def test_no_finite_reconstruction_rejected():
    src = discretize_exponential(1.0, truncation=1.0, step=0.5)
    with pytest.raises(ValueError):
        blahut_arimoto(src, recon=np.array([0.8, 2.0]))


def test_non_convergence_reported():
    with pytest.raises(ConvergenceError):
        blahut_arimoto(discretize_laplacian(1.0, step=0.05), slope=2.0, max_iters=3, tol=1e-15)


def test_rejects_bad_slope():
    with pytest.raises(ValueError):
        blahut_arimoto(bernoulli(), slope=0.0)


def test_rate_scaled_source():
    # the normalized distortion makes R(D) independent of the rate
    p = rate_at_distortion(discretize_laplacian(3.0, step=0.02 / 3), 0.4)
    q = rate_at_distortion(discretize_laplacian(1.0, step=0.02), 0.4)
    assert p.rate == pytest.approx(q.rate, abs=1e-3)


@pytest.mark.parametrize("make", [discretize_laplacian, discretize_exponential])
def test_grid_consistency_at_low_distortion(make):
    r = [rate_at_distortion(make(step=s), 0.2).rate for s in (0.01, 0.005)]
    assert abs(r[0] - r[1]) < 0.02


@pytest.mark.slow
@pytest.mark.parametrize("make", [discretize_laplacian, discretize_exponential])
@pytest.mark.parametrize("D", [0.5, 0.9])
def test_grid_consistency(make, D):
    r = [rate_at_distortion(make(step=s), D).rate for s in (0.01, 0.005)]
    assert abs(r[0] - r[1]) < 0.02
