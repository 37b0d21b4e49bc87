import numpy as np
import pytest
from pcf_sort.errors import DegenerateRangeError, InputDomainError
from pcf_sort.metering import OpCounter
from pcf_sort.pcf import (
    INFER_CDF_COST,
    PcfModel,
    infer_cdf,
    interval_index,
    interval_indices,
    train_pcf,
)


@pytest.mark.parametrize(
    ("x", "expected"),
    [
        (0, 1),  # lower endpoint
        (10, 6),  # upper endpoint lands in beta + 1
        (4, 3),  # floor(4 / 10 * 5) + 1
    ],
)
def test_interval_index(x: int, expected: int):
    assert interval_index(x, 0, 10, 5) == expected


def test_interval_index_errors():
    with pytest.raises(DegenerateRangeError):
        interval_index(3, 3, 3, 5)
    with pytest.raises(InputDomainError, match="outside"):
        interval_index(11, 0, 10, 5)
    with pytest.raises(ValueError, match="beta"):
        interval_index(1, 0, 10, 0)


def test_interval_index_handles_full_uint64_range():
    top = 2**64 - 1
    assert interval_index(top, 0, top, 8) == 9
    assert interval_index(0, 0, top, 8) == 1
    keys = np.array([0, 2**63, top], dtype=np.uint64)
    assert interval_indices(keys, 0, top, 8).tolist() == [1, 5, 9]


def test_interval_index_negative_int64_keys():
    keys = np.array([-(2**63), -1, 0, 2**63 - 1], dtype=np.int64)
    indices = interval_indices(keys, -(2**63), 2**63 - 1, 4)
    assert indices.tolist() == [interval_index(int(k), -(2**63), 2**63 - 1, 4) for k in keys]
    assert indices[0] == 1
    assert indices[-1] == 5


def test_scalar_and_vector_interval_index_agree():
    rng = np.random.default_rng(11)
    for _ in range(50):
        xs = rng.normal(size=200)
        x_min, x_max = xs.min().item(), xs.max().item()
        beta = int(rng.integers(1, 500))
        vector = interval_indices(xs, x_min, x_max, beta)
        scalar = [interval_index(x, x_min, x_max, beta) for x in xs.tolist()]
        assert vector.tolist() == scalar


def test_interval_index_on_keys_spanning_more_than_the_largest_double():
    assert interval_index(-1e308, -1e308, 1e308, 4) == 1
    assert interval_index(0.0, -1e308, 1e308, 4) == 3
    assert interval_index(1e308, -1e308, 1e308, 4) == 5

    keys = np.array([-1e308, -7e307, -2e307, 1e307, 6e307, 1e308])
    indices = interval_indices(keys, -1e308, 1e308, 4)
    assert indices.tolist() == [1, 1, 2, 3, 4, 5]
    assert indices.tolist() == [interval_index(k, -1e308, 1e308, 4) for k in keys.tolist()]

    model = train_pcf(keys, -1e308, 1e308, 4)
    assert model.prefix_counts.tolist() == [2, 3, 4, 5, 6]
    assert infer_cdf(model, 0.0) == 4 / 6


def test_train_pcf_examples():
    model = train_pcf(np.array([1, 3, 5, 7, 9]), 1, 9, 4)
    assert model.prefix_counts.tolist() == [1, 2, 3, 4, 5]
    assert model.alpha == 5

    single = train_pcf(np.array([2]), 0, 10, 2)
    assert single.prefix_counts.tolist() == [1, 1, 1]


def test_train_pcf_errors():
    with pytest.raises(InputDomainError, match="empty"):
        train_pcf(np.array([], dtype=np.float64), 0.0, 1.0, 4)
    with pytest.raises(InputDomainError, match="must lie in"):
        train_pcf(np.array([0.5, 2.0]), 0.0, 1.0, 4)
    with pytest.raises(DegenerateRangeError):
        train_pcf(np.array([1.0]), 1.0, 1.0, 4)


def test_train_pcf_matches_brute_force_counting():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        alpha = int(rng.integers(1, 101))
        beta = int(rng.integers(1, 21))
        sample = rng.integers(-50, 50, size=alpha)
        x_min, x_max = int(sample.min()) - int(rng.integers(0, 3)), int(sample.max()) + 1
        model = train_pcf(sample, x_min, x_max, beta)

        indices = [interval_index(int(a), x_min, x_max, beta) for a in sample]
        expected = [sum(1 for j in indices if j <= i) for i in range(1, beta + 2)]
        assert model.prefix_counts.tolist() == expected
        assert model.prefix_counts[-1] == alpha


def test_infer_cdf_examples():
    model = train_pcf(np.array([1, 3, 5, 7, 9]), 1, 9, 4)
    assert infer_cdf(model, 5) == pytest.approx(0.6)
    assert infer_cdf(model, 9) == 1.0
    assert infer_cdf(model, 1) == pytest.approx(0.2)
    with pytest.raises(InputDomainError):
        infer_cdf(model, 10)


def test_infer_cdf_is_monotone_and_in_unit_interval():
    rng = np.random.default_rng(5)
    for _ in range(200):
        sample = rng.random(int(rng.integers(1, 200)))
        model = train_pcf(sample, 0.0, 1.0, int(rng.integers(1, 100)))
        probes = np.sort(rng.random(1_000))
        cdf = [infer_cdf(model, x) for x in probes.tolist()]
        assert all(0.0 <= f <= 1.0 for f in cdf)
        assert all(f1 <= f2 for f1, f2 in zip(cdf, cdf[1:], strict=False))
        assert np.array_equal(model.cdf_many(probes), np.array(cdf))


def test_cdf_approximates_empirical_cdf_on_full_sample():
    rng = np.random.default_rng(9)
    for _ in range(50):
        x = rng.random(300)
        x_min, x_max = x.min().item(), x.max().item()
        beta = 4 * len(x)
        model = train_pcf(x, x_min, x_max, beta)
        occupancy = np.bincount(model.interval_indices(x)).max()
        empirical = np.searchsorted(np.sort(x), x, side="right") / len(x)
        assert np.all(np.abs(model.cdf_many(x) - empirical) <= occupancy / model.alpha)


def test_charged_costs():
    counter = OpCounter()
    model = train_pcf(np.array([1, 3, 5, 7, 9]), 1, 9, 4, counter)
    # O(alpha + beta): zeroing beta + 2 slots, 5 samples, 5 prefix sums.
    assert 0 < counter.total() < 20 * (5 + 4)

    counter = OpCounter()
    infer_cdf(model, 5, counter)
    assert counter.total() == sum(INFER_CDF_COST.values())


def test_pcf_model_invariants():
    with pytest.raises(ValueError, match="non-decreasing"):
        PcfModel(x_min=0, x_max=1, beta=2, alpha=3, prefix_counts=np.array([2, 1, 3]))
    with pytest.raises(ValueError, match="alpha"):
        PcfModel(x_min=0, x_max=1, beta=2, alpha=4, prefix_counts=np.array([1, 2, 3]))
    with pytest.raises(DegenerateRangeError):
        PcfModel(x_min=1, x_max=1, beta=2, alpha=3, prefix_counts=np.array([1, 2, 3]))


def test_pcf_model_to_dict():
    model = train_pcf(np.array([2]), 0, 10, 2)
    assert model.to_dict() == {
        "x_min": 0,
        "x_max": 10,
        "beta": 2,
        "alpha": 1,
        "prefix_counts": [1, 1, 1],
    }
