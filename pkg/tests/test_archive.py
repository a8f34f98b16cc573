import csv

import numpy as np
import pytest

from swarmmix import InsufficientSamplesError, Sample, SampleArchive


def brute_nearest(entries, query, k, skip=None):
    """Independent oracle: scan everything, sort by (distance, insertion)."""
    scored = []
    for order, s in enumerate(entries):
        dist = 0.0
        for d in range(len(query)):
            if d == skip:
                continue
            diff = float(s.x[d]) - float(query[d])
            dist += diff * diff
        scored.append((dist, order, s))
    scored.sort(key=lambda t: (t[0], t[1]))
    return [s for _, _, s in scored[:k]]


def fill(archive, points, values=None):
    entries = []
    for i, p in enumerate(points):
        s = Sample(np.asarray(p, dtype=float), i if values is None else values[i])
        archive.store(s)
        entries.append(s)
    return entries


def test_store_and_count():
    a = SampleArchive(dim=2, capacity=10)
    assert a.count == 0
    fill(a, [(1.0, 2.0)])
    assert a.count == 1


def test_capacity_reset_then_insert():
    a = SampleArchive(dim=1, capacity=5)
    fill(a, [(float(i),) for i in range(5)])
    assert a.count == 5
    a.store(Sample(np.array([99.0]), 0.0))
    assert a.count == 1
    assert a.lookup_exact([99.0]) is not None
    assert a.lookup_exact([0.0]) is None


def test_duplicate_coordinates_overwrite():
    a = SampleArchive(dim=2, capacity=10)
    a.store(Sample(np.array([1.5, -2.0]), 7.0))
    a.store(Sample(np.array([1.5, -2.0]), 3.0))
    assert a.count == 1
    assert a.lookup_exact([1.5, -2.0]).value == 3.0


def test_lookup_exact_is_bit_exact():
    a = SampleArchive(dim=2, capacity=10)
    a.store(Sample(np.array([1.5, -2.0]), 7.0))
    assert a.lookup_exact([1.5, -2.0]).value == 7.0
    assert a.lookup_exact([1.5, -2.0 + 1e-15]) is None
    assert SampleArchive(dim=2).lookup_exact([0.0, 0.0]) is None


def test_dimension_mismatch_errors():
    a = SampleArchive(dim=2)
    with pytest.raises(ValueError):
        a.store(Sample(np.array([1.0]), 0.0))
    with pytest.raises(ValueError):
        a.lookup_exact([1.0, 2.0, 3.0])


def test_nearest_on_line_of_points():
    a = SampleArchive(dim=1)
    fill(a, [(0.0,), (1.0,), (2.0,), (10.0,)])
    got = a.nearest_to_point([0.0], 2)
    assert sorted(float(s.x[0]) for s in got) == [0.0, 1.0]


def test_k_saturates_at_count():
    a = SampleArchive(dim=2)
    fill(a, [(float(i), 0.0) for i in range(4)])
    assert len(a.nearest_to_point([0.0, 0.0], 9)) == 4


def test_empty_archive_query_raises():
    with pytest.raises(InsufficientSamplesError):
        SampleArchive(dim=2).nearest_to_point([0.0, 0.0], 1)


def test_nearest_matches_bruteforce_3d():
    rng = np.random.default_rng(11)
    a = SampleArchive(dim=3)
    entries = fill(a, rng.uniform(-5, 5, (200, 3)))
    q = rng.uniform(-5, 5, 3)
    got = a.nearest_to_point(q, 10)
    want = brute_nearest(entries, q, 10)
    assert [s.value for s in got] == [s.value for s in want]


def test_line_query_prefers_off_line_distance():
    a = SampleArchive(dim=2)
    fill(a, [(5.0, 0.1), (0.1, 5.0)])
    got = a.nearest_to_line([0.0, 0.0], free_dim=0, k=1)
    assert float(got[0].x[0]) == 5.0


def test_line_query_matches_bruteforce_3d():
    rng = np.random.default_rng(13)
    a = SampleArchive(dim=3)
    entries = fill(a, rng.uniform(-5, 5, (200, 3)))
    q = rng.uniform(-5, 5, 3)
    got = a.nearest_to_line(q, free_dim=1, k=13)
    want = brute_nearest(entries, q, 13, skip=1)
    assert [s.value for s in got] == [s.value for s in want]


def test_on_line_ties_resolve_by_insertion_order():
    a = SampleArchive(dim=2)
    fill(a, [(3.0, 1.0), (-1.0, 1.0), (7.0, 1.0)])  # all on the line y=1
    got = a.nearest_to_line([0.0, 1.0], free_dim=0, k=2)
    assert [float(s.x[0]) for s in got] == [3.0, -1.0]


def test_equidistant_point_ties_resolve_by_insertion_order():
    a = SampleArchive(dim=2)
    fill(a, [(1.0, 0.0), (-1.0, 0.0)])
    got = a.nearest_to_point([0.0, 0.0], 1)
    assert float(got[0].x[0]) == 1.0


def test_randomized_oracle_equivalence():
    rng = np.random.default_rng(101)
    for trial in range(60):
        dim = int(rng.choice([2, 3, 5]))
        n = int(rng.integers(1, 120))
        a = SampleArchive(dim=dim)
        entries = fill(a, rng.uniform(-5, 5, (n, dim)))
        q = rng.uniform(-6, 6, dim)
        k = int(rng.integers(1, n + 4))
        got = a.nearest_to_point(q, k)
        want = brute_nearest(entries, q, k)
        assert [s.value for s in got] == [s.value for s in want]
        free = int(rng.integers(dim))
        got = a.nearest_to_line(q, free, k)
        want = brute_nearest(entries, q, k, skip=free)
        assert [s.value for s in got] == [s.value for s in want]


def test_tree_containment_invariant():
    rng = np.random.default_rng(3)
    a = SampleArchive(dim=3)
    fill(a, rng.uniform(-5, 5, (300, 3)))
    a.nearest_to_point([0.0, 0.0, 0.0], 1)  # force the index to exist
    for node in a._tree_nodes():
        if node.leaf:
            for coords, _ in node.entries:
                assert all(node.lo[d] <= coords[d] <= node.hi[d] for d in range(3))
        else:
            for child in node.children:
                assert all(node.lo[d] <= child.lo[d] and child.hi[d] <= node.hi[d]
                           for d in range(3))


def test_count_never_exceeds_capacity():
    rng = np.random.default_rng(17)
    a = SampleArchive(dim=2, capacity=50)
    for i in range(500):
        a.store(Sample(rng.uniform(-5, 5, 2), float(i)))
        assert a.count <= 50
        if i % 37 == 0 and a.count:
            a.nearest_to_point([0.0, 0.0], 3)  # interleave queries with churn


def test_dump_csv(tmp_path):
    a = SampleArchive(dim=2)
    fill(a, [(1.0, 2.0), (3.0, 4.0)], values=[9.0, 8.0])
    path = tmp_path / "samples.csv"
    a.dump_csv(path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x_1", "x_2", "value"]
    assert rows[1] == ["1.0", "2.0", "9.0"]
    assert len(rows) == 3
