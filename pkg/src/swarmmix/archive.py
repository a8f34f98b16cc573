"""Sample archive: exact-match evaluation cache plus an R-tree spatial
index answering k-nearest-neighbor queries to a point and to an
axis-aligned line.

One entry per coordinate vector (the archive doubles as the evaluation
cache), capacity-capped: inserting beyond capacity clears the whole index
and starts over.  Distance ties are broken by insertion order, older
first, so seeded runs are reproducible.
"""

from __future__ import annotations

import csv
import heapq

import numpy as np

from .core import Sample

MIN_FANOUT = 2
MAX_FANOUT = 8


class InsufficientSamplesError(LookupError):
    """A spatial query hit an empty archive."""


def _point_dist_sq(a, b, skip: int | None) -> float:
    """Squared Euclidean distance, optionally ignoring one coordinate."""
    acc = 0.0
    for d in range(len(a)):
        if d == skip:
            continue
        diff = a[d] - b[d]
        acc += diff * diff
    return acc


def _rect_dist_sq(q, lo, hi, skip: int | None) -> float:
    """Squared distance from point q to a rectangle, ignoring one axis."""
    acc = 0.0
    for d in range(len(q)):
        if d == skip:
            continue
        c = q[d]
        if c < lo[d]:
            diff = lo[d] - c
        elif c > hi[d]:
            diff = c - hi[d]
        else:
            continue
        acc += diff * diff
    return acc


class _Node:
    __slots__ = ("leaf", "lo", "hi", "area", "children", "entries")

    def __init__(self, leaf: bool):
        self.leaf = leaf
        self.lo = None          # per-dim mins of the bounding rectangle
        self.hi = None
        self.area = 0.0
        self.children: list[_Node] = []
        self.entries: list[tuple] = []  # leaf: (coords, seq)

    def items(self):
        return self.entries if self.leaf else self.children

    def recompute_mbr(self):
        if self.leaf:
            rects = [(e[0], e[0]) for e in self.entries]
        else:
            rects = [(c.lo, c.hi) for c in self.children]
        dim = len(rects[0][0])
        self.lo = [min(r[0][d] for r in rects) for d in range(dim)]
        self.hi = [max(r[1][d] for r in rects) for d in range(dim)]
        self.area = _area(self.lo, self.hi)

    def extend_point(self, coords):
        lo, hi = self.lo, self.hi
        if lo is None:
            self.lo = list(coords)
            self.hi = list(coords)
            self.area = 0.0
            return
        changed = False
        for d, c in enumerate(coords):
            if c < lo[d]:
                lo[d] = c
                changed = True
            elif c > hi[d]:
                hi[d] = c
                changed = True
        if changed:
            self.area = _area(lo, hi)


def _area(lo, hi) -> float:
    area = 1.0
    for d in range(len(lo)):
        area *= hi[d] - lo[d]
    return area


def _merge_area(lo, hi, plo, phi) -> float:
    area = 1.0
    for d in range(len(lo)):
        a = lo[d] if lo[d] < plo[d] else plo[d]
        b = hi[d] if hi[d] > phi[d] else phi[d]
        area *= b - a
    return area


class _RTree:
    """Plain R-tree (quadratic split) over point data."""

    def __init__(self, dim: int):
        self.dim = dim
        self.root = _Node(leaf=True)

    def insert(self, coords: tuple, seq: int):
        split = self._insert(self.root, coords, seq)
        if split is not None:
            old_root = self.root
            self.root = _Node(leaf=False)
            self.root.children = [old_root, split]
            self.root.recompute_mbr()

    def _insert(self, node: _Node, coords, seq):
        node.extend_point(coords)
        if node.leaf:
            node.entries.append((coords, seq))
            if len(node.entries) > MAX_FANOUT:
                return self._split(node)
            return None
        # least enlargement wins, smaller area breaks ties
        best = None
        best_enl = best_area = None
        for child in node.children:
            lo, hi = child.lo, child.hi
            merged = 1.0
            for d, c in enumerate(coords):
                a = lo[d] if lo[d] < c else c
                b = hi[d] if hi[d] > c else c
                merged *= b - a
            enl = merged - child.area
            if best is None or enl < best_enl or \
                    (enl == best_enl and child.area < best_area):
                best, best_enl, best_area = child, enl, child.area
        split = self._insert(best, coords, seq)
        if split is not None:
            node.children.append(split)
            if len(node.children) > MAX_FANOUT:
                return self._split(node)
        return None

    def _split(self, node: _Node):
        """Quadratic split: move roughly half the items into a new node."""
        items = node.items()

        if node.leaf:
            rects = [(it[0], it[0]) for it in items]
        else:
            rects = [(it.lo, it.hi) for it in items]
        areas = [_area(lo, hi) for lo, hi in rects]

        # pick the pair of seeds wasting the most area if grouped together
        n = len(items)
        seed_a, seed_b, worst = 0, 1, -np.inf
        for i in range(n):
            li, hi_i = rects[i]
            for j in range(i + 1, n):
                lj, hj = rects[j]
                waste = _merge_area(li, hi_i, lj, hj) - areas[i] - areas[j]
                if waste > worst:
                    seed_a, seed_b, worst = i, j, waste
        group_a = [items[seed_a]]
        group_b = [items[seed_b]]
        rest = [i for i in range(n) if i not in (seed_a, seed_b)]
        lo_a, hi_a = list(rects[seed_a][0]), list(rects[seed_a][1])
        lo_b, hi_b = list(rects[seed_b][0]), list(rects[seed_b][1])

        def absorb(lo, hi, rect):
            for d in range(len(lo)):
                if rect[0][d] < lo[d]:
                    lo[d] = rect[0][d]
                if rect[1][d] > hi[d]:
                    hi[d] = rect[1][d]

        for idx, i in enumerate(rest):
            remaining = len(rest) - idx
            if len(group_a) + remaining <= MIN_FANOUT:
                target = "a"
            elif len(group_b) + remaining <= MIN_FANOUT:
                target = "b"
            else:
                lo, hi_it = rects[i]
                grow_a = _merge_area(lo_a, hi_a, lo, hi_it) - _area(lo_a, hi_a)
                grow_b = _merge_area(lo_b, hi_b, lo, hi_it) - _area(lo_b, hi_b)
                if grow_a < grow_b:
                    target = "a"
                elif grow_b < grow_a:
                    target = "b"
                else:
                    target = "a" if _area(lo_a, hi_a) <= _area(lo_b, hi_b) else "b"
            if target == "a":
                group_a.append(items[i])
                absorb(lo_a, hi_a, rects[i])
            else:
                group_b.append(items[i])
                absorb(lo_b, hi_b, rects[i])

        other = _Node(leaf=node.leaf)
        if node.leaf:
            node.entries = group_a
            other.entries = group_b
        else:
            node.children = group_a
            other.children = group_b
        node.recompute_mbr()
        other.recompute_mbr()
        return other


class SampleArchive:
    """All samples of the current run segment, retrievable exactly by
    coordinates and approximately by nearness.

    The spatial index is built lazily on the first nearness query, so
    configurations that never fit models pay only the dictionary cost.
    Query results are unaffected: correctness does not depend on tree
    shape, and ordering ties always resolve by insertion sequence.
    """

    def __init__(self, dim: int, capacity: int = 20_000):
        if dim < 1:
            raise ValueError("dim must be positive")
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.dim = dim
        self.capacity = capacity
        self._samples: dict[tuple, tuple[Sample, int]] = {}
        self._tree: _RTree | None = None
        self._seq = 0

    def __len__(self) -> int:
        return len(self._samples)

    @property
    def count(self) -> int:
        return len(self._samples)

    def clear(self):
        self._samples.clear()
        self._tree = None
        self._seq = 0

    @staticmethod
    def _key(x) -> tuple:
        return tuple(float(v) for v in x)

    def store(self, s: Sample):
        """Insert (or overwrite) a sample; clears everything first when the
        capacity would be exceeded by a new coordinate."""
        if len(s.x) != self.dim:
            raise ValueError("sample dimension mismatch")
        key = self._key(s.x)
        hit = self._samples.get(key)
        if hit is not None:
            self._samples[key] = (s, hit[1])  # keep original insertion order
            return
        if len(self._samples) + 1 > self.capacity:
            self.clear()
        self._samples[key] = (s, self._seq)
        if self._tree is not None:
            self._tree.insert(key, self._seq)
        self._seq += 1

    def lookup_exact(self, x) -> Sample | None:
        if len(x) != self.dim:
            raise ValueError("query dimension mismatch")
        hit = self._samples.get(self._key(x))
        return hit[0] if hit is not None else None

    def _ensure_tree(self) -> _RTree:
        if self._tree is None:
            self._tree = _RTree(self.dim)
            for key, (_, seq) in sorted(self._samples.items(), key=lambda kv: kv[1][1]):
                self._tree.insert(key, seq)
        return self._tree

    def _knn(self, q: tuple, k: int, skip: int | None) -> list[Sample]:
        if not self._samples:
            raise InsufficientSamplesError("archive is empty")
        if k < 1:
            raise ValueError("k must be positive")
        tree = self._ensure_tree()
        # Best-first search.  Nodes sort before entries at equal distance
        # (kind 0 < 1) so an equal-distance entry with an older sequence
        # number inside a pending node cannot be overtaken.
        heap: list[tuple] = []
        root = tree.root
        if root.lo is not None:
            heapq.heappush(heap, (_rect_dist_sq(q, root.lo, root.hi, skip), 0, id(root), root))
        out: list[Sample] = []
        want = min(k, len(self._samples))
        while heap and len(out) < want:
            dist, kind, tie, obj = heapq.heappop(heap)
            if kind == 1:
                out.append(self._samples[obj][0])
                continue
            if obj.leaf:
                for coords, seq in obj.entries:
                    heapq.heappush(heap, (_point_dist_sq(q, coords, skip), 1, seq, coords))
            else:
                for child in obj.children:
                    heapq.heappush(heap, (_rect_dist_sq(q, child.lo, child.hi, skip), 0, id(child), child))
        return out

    def nearest_to_point(self, x, k: int) -> list[Sample]:
        """min(k, count) stored samples by ascending Euclidean distance."""
        if len(x) != self.dim:
            raise ValueError("query dimension mismatch")
        return self._knn(self._key(x), k, skip=None)

    def nearest_to_line(self, anchor, free_dim: int, k: int) -> list[Sample]:
        """Nearest samples to the axis-aligned line through ``anchor``
        along ``free_dim`` (distance in the remaining coordinates)."""
        if len(anchor) != self.dim:
            raise ValueError("query dimension mismatch")
        if not 0 <= free_dim < self.dim:
            raise ValueError("free_dim out of range")
        return self._knn(self._key(anchor), k, skip=free_dim)

    def samples(self) -> list[Sample]:
        """All stored samples in insertion order."""
        return [s for s, _ in sorted(self._samples.values(), key=lambda v: v[1])]

    def dump_csv(self, path):
        """Debug dump: one row per sample, columns x_1..x_dim,value."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"x_{d + 1}" for d in range(self.dim)] + ["value"])
            for s in self.samples():
                w.writerow([repr(float(v)) for v in s.x] + [repr(s.value)])

    # introspection used by the structural tests
    def _tree_nodes(self):
        tree = self._ensure_tree()
        stack = [tree.root]
        while stack:
            node = stack.pop()
            yield node
            if not node.leaf:
                stack.extend(node.children)
