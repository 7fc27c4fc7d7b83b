import csv
import io
import math

import pytest
from scipy import integrate

from poissonrd.experiment import (
    CSV_COLUMNS, empirical_entropy, empirical_rd_experiment, floor_residual_mean,
    step_for_distortion, to_csv,
)


@pytest.mark.parametrize("step,rate", [(0.05, 1.0), (0.2, 1.0), (1.0, 2.0), (3.0, 0.5)])
def test_floor_residual_matches_quadrature(step, rate):
    # E[x - step*floor(x/step)] summed cell by cell
    total = 0.0
    for k in range(int(60 / (rate * step)) + 1):
        lo = k * step
        total += integrate.quad(lambda x: (x - lo) * rate * math.exp(-rate * x), lo, lo + step)[0]
    assert floor_residual_mean(step, rate) == pytest.approx(total, rel=1e-8)


def test_step_inverts_residual():
    for D in (0.05, 0.2, 0.5, 0.9):
        assert floor_residual_mean(step_for_distortion(D)) == pytest.approx(D, abs=1e-12)
    with pytest.raises(ValueError):
        step_for_distortion(1.0)


def test_entropy():
    assert empirical_entropy("aabb") == 1.0
    assert empirical_entropy([7] * 5) == 0.0


def test_point_covering_experiment():
    (p,) = empirical_rd_experiment("point-covering", 1.0, 16, ["1/4"], samples=300)
    assert p.distortion <= 0.25
    assert 2.0 <= p.rate <= 2.0 + 1.7
    assert p.metadata["R_theory"] == 2.0


@pytest.mark.parametrize("step", [0.1, 0.2])
def test_one_sided_floor_quantizer_near_half_step(step):
    D = floor_residual_mean(step)
    (p,) = empirical_rd_experiment("one-sided-l1", 1.0, 10, [D], samples=20_000)
    assert p.distortion == pytest.approx(step / 2, rel=0.05)
    assert p.distortion == pytest.approx(D, rel=0.02)


def test_laplacian_quantizer_distortion():
    (p,) = empirical_rd_experiment("normalized-l1", 2.0, 10, [0.3], samples=20_000)
    assert p.distortion == pytest.approx(0.3, rel=0.02)
    assert p.rate > math.log2(1 / 0.3)


@pytest.mark.parametrize("kind", ["point-covering", "one-sided-l1", "normalized-l1"])
def test_unit_distortion_is_free(kind):
    (p,) = empirical_rd_experiment(kind, 1.0, 8, [1], samples=200)
    assert p.rate == 0.0


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        empirical_rd_experiment("queueing", 1.0, 4, [0.5], 10)
    with pytest.raises(ValueError):
        empirical_rd_experiment("one-sided-l1", 1.0, 4, [0], 10)
    with pytest.raises(ValueError):
        empirical_rd_experiment("one-sided-l1", 1.0, 4, [1.5], 10)


def test_csv_layout_and_determinism():
    pts = empirical_rd_experiment("one-sided-l1", 1.0, 4, [0.25, 0.5], samples=500, seed=3)
    text = to_csv(pts)
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 3 and rows[1][0] == "0.25" and rows[1][7] == "3"
    assert to_csv(empirical_rd_experiment("one-sided-l1", 1.0, 4, [0.25, 0.5], samples=500, seed=3)) == text
