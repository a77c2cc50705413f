import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ofa_pbs.dist import (
    ParameterError,
    fosd_dominates,
    from_config,
    make_exponential,
    make_uniform,
)


def test_exponential_boundaries():
    d = make_exponential(1.0)
    assert d.cdf(0.0) == 0.0
    assert d.cdf(1e6) == 1.0
    assert d.cdf(-3.0) == 0.0
    assert d.pdf(-1.0) == 0.0


def test_exponential_values():
    assert make_exponential(1.0).cdf(1.0) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert round(make_exponential(1.0).cdf(1.0), 6) == 0.632121
    assert make_exponential(2.0).quantile(0.5) == pytest.approx(math.log(2) / 2, abs=1e-12)
    assert round(make_exponential(2.0).quantile(0.5), 6) == 0.346574


@pytest.mark.parametrize("rate", [0.0, -1.0, float("inf"), float("nan"), "x"])
def test_rejects_bad_rate(rate):
    with pytest.raises(ParameterError):
        make_exponential(rate)


@pytest.mark.parametrize("d", [make_exponential(0.5), make_exponential(3.0), make_uniform(2.0)],
                         ids=["exp0.5", "exp3", "unif2"])
def test_support_hint_and_monotone(d):
    assert d.cdf(d.support_hint) >= 1 - 1e-9
    grid = np.linspace(-1, 2 * d.support_hint, 5000)
    assert np.all(np.diff(d.cdf(grid)) >= 0)
    assert np.all(d.pdf(grid) >= 0)


@pytest.mark.parametrize("rate", [0.5, 1.0, 2.0, 8.0])
def test_pdf_is_cdf_derivative(rate):
    d = make_exponential(rate)
    h = 1e-6 * d.support_hint
    # the density jumps at 0, so the central difference is taken on the interior
    grid = np.linspace(0.0, d.support_hint, 1001)[1:]
    fd = (d.cdf(grid + h) - d.cdf(grid - h)) / (2 * h)
    assert np.max(np.abs(fd - d.pdf(grid))) <= 1e-4


def test_support_hint_is_tail_quantile():
    d = make_exponential(4.0)
    assert d.support_hint == pytest.approx(d.quantile(1 - 1e-10), rel=1e-6)
    assert 1 - d.cdf(d.support_hint) <= 1e-10 * (1 + 1e-6)


@pytest.mark.parametrize("d", [make_exponential(0.7), make_uniform(3.0)])
def test_quantile_round_trip(d):
    q = np.arange(1, 100) / 100
    assert np.max(np.abs(d.cdf(d.quantile(q)) - q)) <= 1e-9


def test_sampling_median():
    rate = 1.7
    d = make_exponential(rate)
    rng = np.random.default_rng(2024)
    x = d.sample(rng, 1_000_000)
    assert abs(np.mean(x <= d.quantile(0.5)) - 0.5) <= 4 * math.sqrt(0.25 / 1e6)


def test_fosd_examples():
    e1, e2 = make_exponential(1.0), make_exponential(2.0)
    assert fosd_dominates(e1, e1, 100)
    assert fosd_dominates(e1, e2, 100)
    assert not fosd_dominates(e2, e1, 100)


def test_fosd_uniforms():
    assert fosd_dominates(make_uniform(2.0), make_uniform(1.0))
    assert not fosd_dominates(make_uniform(1.0), make_uniform(2.0))


def test_fosd_grid_validation():
    e = make_exponential(1.0)
    with pytest.raises(ParameterError):
        fosd_dominates(e, e, 1)


@given(st.floats(0.05, 20), st.floats(0.05, 20))
def test_fosd_antisymmetry(r1, r2):
    f, g = make_exponential(r1), make_exponential(r2)
    if fosd_dominates(f, g, 200) and fosd_dominates(g, f, 200):
        grid = np.linspace(0, max(f.support_hint, g.support_hint), 200)
        assert np.max(np.abs(f.cdf(grid) - g.cdf(grid))) <= 1e-12


def test_config_round_trip():
    d = from_config({"family": "exponential", "rate": 2.5})
    assert d == make_exponential(2.5)
    assert from_config(d.to_config()) == d
    with pytest.raises(ParameterError):
        from_config({"family": "pareto", "alpha": 2})
    with pytest.raises(ParameterError):
        from_config({"family": "exponential"})
