import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grassfeed.montecarlo import block_sizes, mean_stderr, run_trials


def _kernel(rng, size):
    return rng.standard_normal(size)


def _dict_kernel(rng, size):
    x = rng.standard_normal((size, 2))
    return {"a": x[:, 0], "b": x}


@given(trials=st.integers(1, 100_000), block=st.integers(1, 5000))
def test_block_sizes_partition(trials, block):
    sizes = block_sizes(trials, block)
    assert sum(sizes) == trials
    assert all(0 < s <= block for s in sizes)


def test_block_sizes_rejects_zero():
    with pytest.raises(ValueError):
        block_sizes(0)


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_worker_count_does_not_change_results(workers):
    base = run_trials(_kernel, 50_000, 9, key=(1,), block_size=4096)
    par = run_trials(_kernel, 50_000, 9, key=(1,), workers=workers, block_size=4096)
    assert np.array_equal(base, par)


def test_dict_outputs_concatenate():
    out = run_trials(_dict_kernel, 10_000, 1, block_size=3000, workers=2)
    assert out["a"].shape == (10_000,)
    assert out["b"].shape == (10_000, 2)
    assert np.array_equal(out["a"], out["b"][:, 0])


def test_keys_separate_streams():
    a = run_trials(_kernel, 100, 1, key=(1,))
    b = run_trials(_kernel, 100, 1, key=(2,))
    assert not np.array_equal(a, b)


def test_mean_stderr():
    m, se = mean_stderr([1.0, 2.0, 3.0, 4.0])
    assert m == 2.5
    assert np.isclose(se, np.std([1, 2, 3, 4], ddof=1) / 2.0)
    m, se = mean_stderr([5.0])
    assert m == 5.0 and se == 0.0
