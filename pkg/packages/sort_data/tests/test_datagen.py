import numpy as np
import pytest
from pydantic import ValidationError
from sort_data.datagen import BENCHMARK_DISTRIBUTIONS, generate, shuffle
from sort_data.schemas import (
    Exponential,
    LogNormal,
    Normal,
    SkewMixture,
    Uniform,
    distribution_from_kind,
)


@pytest.mark.parametrize("spec", BENCHMARK_DISTRIBUTIONS, ids=lambda spec: spec.kind)
def test_generate_zero_keys(spec):
    keys = generate(spec, 0)
    assert keys.shape == (0,)
    assert keys.dtype == np.float64


@pytest.mark.parametrize("spec", [*BENCHMARK_DISTRIBUTIONS, SkewMixture()], ids=lambda s: s.kind)
def test_generate_is_deterministic_and_finite(spec):
    first = generate(spec, 10_001)
    assert np.array_equal(first, generate(spec, 10_001))
    assert len(first) == 10_001
    assert np.isfinite(first).all()
    assert not np.array_equal(first, generate(spec.model_copy(update={"seed": 1}), 10_001))


def test_uniform_keys():
    keys = generate(Uniform(), 100_000)
    assert 0.49 < keys.mean() < 0.51
    assert keys.min() >= 0.0
    assert keys.max() < 1.0

    shifted = generate(Uniform(min=-3.0, max=5.0, seed=2), 10_000)
    assert shifted.min() >= -3.0
    assert shifted.max() < 5.0


def test_normal_keys():
    keys = generate(Normal(mu=2.0, sigma=3.0), 100_000)
    assert keys.mean() == pytest.approx(2.0, abs=0.05)
    assert keys.std() == pytest.approx(3.0, rel=0.02)


def test_exponential_keys():
    keys = generate(Exponential(lam=4.0), 100_000)
    assert keys.min() >= 0.0
    assert keys.mean() == pytest.approx(0.25, rel=0.02)


def test_lognormal_keys():
    keys = generate(LogNormal(), 100_000)
    assert keys.min() > 0.0
    assert np.median(keys) == pytest.approx(1.0, rel=0.03)


def test_skew_mixture_concentrates_in_the_peak():
    spec = SkewMixture(peak_fraction=0.5, peak_width=1e-4)
    keys = generate(spec, 100_000)
    in_peak = (keys < spec.peak_width).mean()
    assert in_peak == pytest.approx(0.5, abs=0.01)
    assert keys.max() < 1.0


def test_generate_rejects_negative_n():
    with pytest.raises(ValueError, match="non-negative"):
        generate(Uniform(), -1)


def test_shuffle():
    assert shuffle(np.array([], dtype=np.float64), 0).tolist() == []

    x = np.arange(1_000, dtype=np.int64)
    shuffled = shuffle(x, 7)
    assert shuffled.dtype == x.dtype
    assert sorted(shuffled.tolist()) == x.tolist()
    assert np.array_equal(shuffled, shuffle(x, 7))
    assert not np.array_equal(shuffled, x)
    assert x.tolist() == list(range(1_000))  # input untouched


def test_shuffle_puts_each_key_first_equally_often():
    x = np.arange(10)
    firsts = np.array([shuffle(x, seed)[0] for seed in range(6_000)])
    frequencies = np.bincount(firsts, minlength=10) / len(firsts)
    assert np.all(np.abs(frequencies - 0.1) <= 0.02)


def test_distribution_validation():
    with pytest.raises(ValidationError, match="greater than min"):
        Uniform(min=1.0, max=1.0)
    with pytest.raises(ValidationError):
        Normal(sigma=0.0)
    with pytest.raises(ValidationError):
        Exponential(lam=-1.0)
    with pytest.raises(ValidationError):
        SkewMixture(peak_fraction=1.0)
    with pytest.raises(ValidationError):
        Uniform(seed=-1)
    with pytest.raises(ValidationError):
        distribution_from_kind("cauchy")


def test_distribution_from_kind():
    spec = distribution_from_kind("normal", sigma=2, seed=3)
    assert spec == Normal(sigma=2.0, seed=3)
    assert distribution_from_kind("uniform") == Uniform()


def test_density_bounds():
    assert Uniform(min=0.0, max=2.0).density_bounds() == (0.5, 0.5)
    assert Normal().density_bounds() is None
    assert Exponential().density_bounds() is None
    assert LogNormal().density_bounds() is None
    sigma1, sigma2 = SkewMixture(peak_fraction=0.5, peak_width=1e-4).density_bounds()
    assert sigma1 == pytest.approx(0.5)
    assert sigma2 == pytest.approx(5_000.5)
