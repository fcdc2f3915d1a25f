import numpy as np
import pytest

import ggarray


def test_locate_and_scan():
    assert ggarray.locate(6, first_bucket=1) == (2, 3)
    assert ggarray.locate(5, first_bucket=2) == (1, 3)
    assert ggarray.exclusive_scan([1, 1, 1]) == [0, 1, 2]
    ranges, ops = ggarray.scan_reserve([0, 3, 0, 2])
    assert [r[0] for r in ranges] == [0, 0, 3, 3]
    assert ops == 1


def test_shard_vector():
    s = ggarray.ShardVector(first_bucket=2)
    s.push_back_batch(np.array([1], dtype=np.uint32))
    assert s.push_back_batch(np.arange(2, 6, dtype=np.uint32)) == (1, 4)
    assert s.capacity == 6
    assert list(s.to_numpy()) == [1, 2, 3, 4, 5]
    with pytest.raises(IndexError):
        s[5]


def test_growable_round_trip():
    values = np.arange(1000, dtype=np.uint32)
    a = ggarray.GrowableArray.from_flat(values, shards=7, first_bucket=4)
    assert len(a) == 1000
    assert np.array_equal(a.flatten(), values)
    a.add(30)
    assert a[999] == 1029
    a[0] = 7
    assert a.flatten()[0] == 7


def test_insert_parallel_and_grow():
    a = ggarray.GrowableArray(shards=4, first_bucket=2)
    batches = [np.array(b, dtype=np.uint32) for b in ([1, 2], [], [3, 4, 5], [6])]
    a.insert_parallel(batches)
    assert a.prefix == [0, 2, 2, 5, 6]
    assert a.locate_shard(2) == (2, 0)
    assert a.grow(1000) > 0
    assert a.grow(a.capacity) == 0
    with pytest.raises(ValueError):
        a.insert_parallel(batches[:3])


def test_baselines():
    st = ggarray.StaticArray(3)
    st.insert_batch(np.array([1, 2, 3], dtype=np.uint32))
    with pytest.raises(MemoryError):
        st.insert_batch(np.array([4], dtype=np.uint32))
    d = ggarray.DoublingArray(4)
    d.insert_batch(np.arange(4, dtype=np.uint32))
    assert d.resize(5) == 4
    assert d.capacity == 8
    c = ggarray.ChunkTableArray(8)
    c.resize(20)
    c.insert_batch(np.arange(20, dtype=np.uint32))
    assert c.copies == 0
    assert list(c.to_numpy()) == list(range(20))


def test_memory_model():
    assert abs(ggarray.normal_quantile(0.99) - 2.3263478740408408) < 1e-9
    assert ggarray.static_requirement(sigma=0.0) == 4_000_000
    csv = ggarray.memory_model_csv(samples=1000, base_size=10_000)
    lines = csv.strip().splitlines()
    assert lines[0] == "sigma,optimal_mean,static_p99,ggarray_mean,static_ratio,ggarray_ratio"
    assert len(lines) == 22


def test_bench():
    cfg = ggarray.BenchConfig()
    cfg.initial_size = 500
    cfg.iterations = 2
    cfg.structure = "chunktable"
    out = ggarray.bench_grow_insert_rw(cfg)
    assert out.splitlines()[0].startswith("experiment,structure,")
    with pytest.raises(ValueError):
        cfg.structure = "list"
