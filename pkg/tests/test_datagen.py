import numpy as np
import pytest

from windowshare import (
    GenParams,
    GenerationError,
    WindowSpec,
    constant_rate_stream,
    random_windows,
    sequential_windows,
)
from windowshare.datagen import VALUE_GRID


def test_random_tumbling_shape():
    p = GenParams(count=5, tumbling=True, seed_ranges=(2, 5, 10), range_multiplier=50, seed=1)
    ws = random_windows(p)
    assert len(ws) == 5 and len(set(ws)) == 5
    for w in ws:
        assert w.tumbling
        assert any(2 * r0 <= w.range <= 50 * r0 and w.range % r0 == 0 for r0 in (2, 5, 10))


def test_random_hopping_has_double_range():
    p = GenParams(count=6, tumbling=False, seed_slides=(5, 10, 20), slide_multiplier=50, seed=2)
    for w in random_windows(p):
        assert w.range == 2 * w.slide
        assert w.range % w.slide == 0


def test_random_deterministic_per_seed():
    p = GenParams(count=5, tumbling=True, seed=77)
    assert random_windows(p) == random_windows(p)
    q = GenParams(count=5, tumbling=True, seed=78)
    assert random_windows(p) != random_windows(q)


def test_random_exhausts_small_space():
    # multiplier 2 admits a single distinct window per seed value
    p = GenParams(count=3, tumbling=True, seed_ranges=(10,), range_multiplier=2, seed=0)
    with pytest.raises(GenerationError):
        random_windows(p)


def test_sequential_tumbling_example():
    p = GenParams(count=3, tumbling=True, seed_ranges=(10,), seed=0)
    assert sequential_windows(p) == (WindowSpec(20, 20), WindowSpec(30, 30), WindowSpec(40, 40))


def test_sequential_hopping_example():
    p = GenParams(count=2, tumbling=False, seed_slides=(5,), seed=0)
    assert sequential_windows(p) == (WindowSpec(20, 10), WindowSpec(30, 15))


def test_sequential_single():
    p = GenParams(count=1, tumbling=True, seed_ranges=(7,), seed=0)
    assert sequential_windows(p) == (WindowSpec(14, 14),)


def test_sequential_budget():
    with pytest.raises(ValueError):
        sequential_windows(GenParams(count=5, tumbling=True, range_multiplier=4, seed=0))


def test_params_validation():
    with pytest.raises(ValueError):
        GenParams(count=0)
    with pytest.raises(ValueError):
        GenParams(count=1, range_multiplier=1)
    with pytest.raises(ValueError):
        GenParams(count=1, seed_ranges=())


def test_constant_rate_counts():
    s = constant_rate_stream(1, 120, keys=1, seed=0)
    assert len(s) == 120
    assert list(np.unique(s.ts)) == list(range(120))

    s = constant_rate_stream(2, 10, keys=2, seed=0)
    assert len(s) == 20
    assert int((s.key_codes == 0).sum()) == 10
    assert int((s.key_codes == 1).sum()) == 10


def test_constant_rate_values_on_grid():
    s = constant_rate_stream(1, 500, keys=1, seed=9)
    assert float(s.values.min()) >= 0.0 and float(s.values.max()) < 100.0
    scaled = s.values / VALUE_GRID
    assert np.array_equal(scaled, np.round(scaled))


def test_constant_rate_deterministic():
    a = constant_rate_stream(2, 50, keys=3, seed=5)
    b = constant_rate_stream(2, 50, keys=3, seed=5)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.ts, b.ts)
