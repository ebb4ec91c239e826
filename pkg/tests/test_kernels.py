import random

import numpy as np
import pytest

from gradedroots import _kernels


def random_posdef(rng, s):
    """Random positive-definite integer matrix (A^T A + identity)."""
    A = [[rng.randint(-2, 2) for _ in range(s)] for _ in range(s)]
    Q = [[sum(A[k][i] * A[k][j] for k in range(s)) + (i == j)
          for j in range(s)] for i in range(s)]
    return Q


BACKENDS = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])


@pytest.mark.parametrize("backend", BACKENDS)
def test_box_scan_matches_brute_force(backend):
    rng = random.Random(5)
    for _ in range(25):
        s = rng.randint(1, 4)
        Q = random_posdef(rng, s)
        c = [rng.randint(-4, 4) for _ in range(s)]
        lo = [rng.randint(-3, 0) for _ in range(s)]
        hi = [l + rng.randint(0, 4) for l in lo]
        limit = rng.randint(-2, 30)
        coords, h = _kernels.box_scan(Q, c, limit, lo, hi, backend=backend)
        import itertools
        expect = []
        for x in itertools.product(*[range(l, u + 1) for l, u in zip(lo, hi)]):
            val = (sum(Q[i][j] * x[i] * x[j] for i in range(s) for j in range(s))
                   - sum(ci * xi for ci, xi in zip(c, x)))
            if val <= limit:
                expect.append((x, val))
        got = sorted((tuple(row), int(v)) for row, v in zip(coords.tolist(), h.tolist()))
        assert got == sorted(expect)


def test_box_scan_backends_and_object_agree():
    rng = random.Random(11)
    for _ in range(10):
        s = rng.randint(1, 3)
        Q = random_posdef(rng, s)
        c = [rng.randint(-3, 3) for _ in range(s)]
        lo = [-2] * s
        hi = [3] * s
        results = []
        for kw in ({"backend": "numpy"}, {"exact_object": True}):
            coords, h = _kernels.box_scan(Q, c, 9, lo, hi, **kw)
            results.append(sorted((tuple(r), int(v))
                                  for r, v in zip(coords.tolist(), h.tolist())))
        if _kernels.HAVE_NUMBA:
            coords, h = _kernels.box_scan(Q, c, 9, lo, hi, backend="numba")
            results.append(sorted((tuple(r), int(v))
                                  for r, v in zip(coords.tolist(), h.tolist())))
        assert all(r == results[0] for r in results)


def test_lattice_edges():
    coords = np.array([[0, 0], [1, 0], [0, 1], [2, 2]], dtype=np.int64)
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    eu, ev = _kernels.lattice_edges(coords, lo, hi)
    got = sorted(zip(eu.tolist(), ev.tolist()))
    assert got == [(0, 1), (0, 2)]


@pytest.mark.parametrize("backend", BACKENDS)
def test_sublevel_labels(backend):
    # path 0-1-2 at levels 0,1,0 plus an isolated point at level 2
    chi = np.array([0, 0, 1, 2], dtype=np.int64)
    # points sorted by chi: indices 0 and 1 are the two minima, 2 joins them
    eu = np.array([0, 1], dtype=np.int64)
    ev = np.array([2, 2], dtype=np.int64)
    labels = _kernels.sublevel_labels(chi, eu, ev, 0, 2, backend=backend)
    assert labels[0].tolist() == [0, 1, -1, -1]
    assert labels[1].tolist() == [0, 0, 0, -1]
    assert labels[2].tolist() == [0, 0, 0, 3]


def test_labels_backends_agree():
    if not _kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 60)
        chi = np.array(sorted(rng.randint(-3, 4) for _ in range(n)), dtype=np.int64)
        edges = set()
        for _ in range(rng.randint(0, 2 * n)):
            a, b = rng.randrange(n), rng.randrange(n)
            if a != b:
                edges.add((min(a, b), max(a, b)))
        eu = np.array([e[0] for e in edges], dtype=np.int64)
        ev = np.array([e[1] for e in edges], dtype=np.int64)
        a = _kernels.sublevel_labels(chi, eu, ev, int(chi.min()), int(chi.max()) + 1,
                                     backend="numba")
        b = _kernels.sublevel_labels(chi, eu, ev, int(chi.min()), int(chi.max()) + 1,
                                     backend="numpy")
        assert np.array_equal(a, b)


def test_backend_env(monkeypatch):
    monkeypatch.setenv("GRADEDROOTS_BACKEND", "numpy")
    assert _kernels.backend_name() == "numpy"
    monkeypatch.setenv("GRADEDROOTS_BACKEND", "bogus")
    with pytest.raises(ValueError):
        _kernels.backend_name()
    monkeypatch.delenv("GRADEDROOTS_BACKEND")
    assert _kernels.backend_name() in ("numba", "numpy")
