"""Spin^c structures of a plumbed manifold as orbits of Char modulo 2L.

L' is identified with Z^s through pairing vectors c_j = (l', b_j); the
sublattice L sits inside as the image of B.  The quotient H = L'/L is
presented by the Smith normal form of B, which both enumerates the orbits
and decides membership questions exactly.

Each orbit [k] = K + 2(l' + L) carries a distinguished representative:
the unique componentwise-minimal element l'_[k] of (l' + L) intersected
with the cone S_Q = {x : (x, b_j) <= 0 for all j}.  It is computed by a
generalized Laufer ascent, starting from the componentwise ceiling of -l'
and pushing up any basis direction with positive pairing until none is
left; the result is independent of the order of pushes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .plumbing import (CharElement, DualVector, canonical_class,
                       characteristic_from_pairings, chi_k)


class NotIntegral(ValueError):
    """The given vector does not lie in L' (non-integer pairings)."""


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A):
    """U A V = D with U, V unimodular and D = diag(d_1 | d_2 | ... ), d_i >= 0.

    Returns (diag, U, V) as plain nested lists of ints."""
    A = [list(map(int, row)) for row in A]
    n = len(A)
    m = len(A[0]) if n else 0
    U, V = _identity(n), _identity(m)

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(n):
            A[r][i] -= q * A[r][j]
        for r in range(m):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(m):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    def diagonalize():
        t = 0
        while t < min(n, m):
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if A[i][j] and (best is None
                                    or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    row_op(i, t, A[i][t] // A[t][t])
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, m):
                if A[t][j]:
                    col_op(j, t, A[t][j] // A[t][t])
                    dirty = dirty or A[t][j] != 0
            if not dirty:
                t += 1

    diagonalize()
    # enforce the divisibility chain: mixing col_t with col_{t+1} plants the
    # pair back in one block, and rediagonalizing replaces it by gcd | lcm
    while True:
        fixed = True
        for t in range(min(n, m) - 1):
            a, b = A[t][t], A[t + 1][t + 1]
            if a and b and b % a != 0:
                col_op(t, t + 1, -1)
                fixed = False
        if fixed:
            break
        diagonalize()
    for i in range(min(n, m)):
        if A[i][i] < 0:
            A[i] = [-a for a in A[i]]
            U[i] = [-a for a in U[i]]
    return [A[i][i] for i in range(min(n, m))], U, V


def _int_inverse(M):
    """Exact inverse of a unimodular integer matrix, as integer lists."""
    n = len(M)
    aug = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [a / pv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    out = []
    for row in aug:
        vals = row[n:]
        assert all(v.denominator == 1 for v in vals)
        out.append([int(v) for v in vals])
    return out


@dataclass(frozen=True)
class HGroup:
    """H = L'/L = coker(B) in Smith coordinates.

    ``smith_diag`` lists all elementary divisors (including any 1s); their
    product equals |det B|.  ``U`` maps pairing vectors to Smith
    coordinates: c is in L exactly when U c == 0 mod diag."""

    order: int
    smith_diag: tuple
    U: tuple
    U_inv: tuple
    V: tuple

    def coords(self, pairings):
        """Smith coordinates of an element of L' given by its pairings."""
        return tuple(sum(u * c for u, c in zip(row, pairings)) % d if d else
                     sum(u * c for u, c in zip(row, pairings))
                     for row, d in zip(self.U, self.smith_diag))

    def contains_lattice(self, pairings):
        """Is the element with these pairings in the image of L?"""
        return all(v == 0 for v in self.coords(pairings))


def smith_decompose(B):
    """Smith presentation of coker(B) for a nondegenerate integer matrix."""
    diag, U, V = smith_normal_form(B)
    order = 1
    for d in diag:
        order *= d
    assert order != 0, "B must be nondegenerate"
    return HGroup(order=abs(order), smith_diag=tuple(diag),
                  U=tuple(tuple(r) for r in U),
                  U_inv=tuple(tuple(r) for r in _int_inverse(U)),
                  V=tuple(tuple(r) for r in V))


# ---------------------------------------------------------------------------
# distinguished representatives


def distinguished_rep(graph, l_prime):
    """The minimal element l'_[k] of (l' + L) n S_Q, by Laufer ascent.

    Start at x0 = ceil(-l') componentwise (a lower bound for the minimum,
    since every element of S_Q is effective) and repeatedly add b_j for the
    smallest j with (x + l', b_j) > 0.  Termination is forced by negative
    definiteness; the endpoint does not depend on the choice of j.
    """
    if isinstance(l_prime, (list, tuple)):
        l_prime = DualVector(l_prime)
    c = graph.pairings(l_prime)
    if any(Fraction(v).denominator != 1 for v in c):
        raise NotIntegral("vector is not in L': pairing with some b_j is not integral")
    c = [int(v) for v in c]
    B = graph.form.B
    # the minimum m satisfies m >= 0, hence m - l' >= ceil(-l') componentwise
    x = [math.ceil(-coef) for coef in l_prime.coeffs]
    pair = [ci + sum(B[i][j] * xj for j, xj in enumerate(x) if xj)
            for i, ci in enumerate(c)]
    while True:
        j = next((i for i, p in enumerate(pair) if p > 0), None)
        if j is None:
            break
        x[j] += 1
        pair[j] += B[j][j]
        for nb in graph.adjacency[j]:
            pair[nb] += 1
    return DualVector(Fraction(cf) + xv for cf, xv in zip(l_prime.coeffs, x))


@dataclass(frozen=True)
class SpincOrbit:
    """One spin^c structure, held by its distinguished data.

    * ``l_prime_min``: the minimal representative l'_[k] in S_Q,
    * ``pairings``: its integer pairing vector ((l'_[k], b_j))_j,
    * ``k_r`` = K + 2 l'_[k], the distinguished characteristic element,
    * ``orbit_index``: position in the canonical Smith-coordinate order.
    """

    l_prime_min: DualVector
    pairings: tuple
    k_r: CharElement
    orbit_index: int


def _orbit_from_rep(graph, K, l_min, index):
    pmin = tuple(int(v) for v in graph.pairings(l_min))
    kr = characteristic_from_pairings(
        graph, tuple(kp + 2 * lp for kp, lp in zip(K.pairings, pmin)))
    return SpincOrbit(l_prime_min=l_min, pairings=pmin, k_r=kr, orbit_index=index)


def enumerate_spinc(graph):
    """All |det B| spin^c orbits, in canonical Smith-coordinate order.

    Each Smith tuple t (0 <= t_i < d_i) is mapped back to a pairing vector
    U^{-1} t, whose class is then normalized through
    :func:`distinguished_rep`."""
    H = smith_decompose(graph.form.B)
    K = canonical_class(graph)
    s = graph.s
    orbits = []
    ranges = [range(d) for d in H.smith_diag]
    for index, t in enumerate(itertools.product(*ranges)):
        c = tuple(sum(H.U_inv[i][j] * t[j] for j in range(s)) for i in range(s))
        l0 = graph.dual_from_pairings(c)
        l_min = distinguished_rep(graph, l0)
        orbits.append(_orbit_from_rep(graph, K, l_min, index))
    assert len(orbits) == H.order
    return orbits


def orbit_of(graph, orbits, l_prime):
    """Find the enumerated orbit containing l' + L (matching by Smith coords)."""
    H = smith_decompose(graph.form.B)
    c = graph.pairings(l_prime)
    if any(Fraction(v).denominator != 1 for v in c):
        raise NotIntegral("vector is not in L'")
    key = H.coords(tuple(int(v) for v in c))
    for orb in orbits:
        if H.coords(orb.pairings) == key:
            return orb
    raise LookupError("orbit not found; inconsistent enumeration")


def canonical_orbit(graph, orbits=None):
    """The orbit [K], i.e. the one with l'_[K] = 0."""
    if orbits is None:
        orbits = enumerate_spinc(graph)
    zero = DualVector([0] * graph.s)
    return orbit_of(graph, orbits, zero)


# ---------------------------------------------------------------------------
# m_k = min chi_k


def m_k(graph, k, method="auto"):
    """m_k = (k^2 - max_{k' in [k]} (k')^2) / 8 = min over L of chi_k.

    Reduce k to the distinguished representative k_r of its orbit and use
    min chi_k = min chi_{k_r} - chi_{k_r}(l) for k = k_r + 2l.  The minimum
    of chi_{k_r} comes from the computation-sequence engine when the graph
    certifies almost-rational, else from exact sublevel enumeration.
    ``method`` is one of 'auto', 'engine', 'oracle'.
    """
    K = canonical_class(graph)
    lp = tuple((a - b) // 2 for a, b in zip(k.pairings, K.pairings))
    l_prime = graph.dual_from_pairings(lp)
    l_min = distinguished_rep(graph, l_prime)
    diff = l_prime - l_min
    assert diff.is_integral()
    l = diff.as_lattice()
    orb = _orbit_from_rep(graph, K, l_min, -1)

    min_kr = None
    if method in ("auto", "engine"):
        from . import engine
        cls = engine.classify(graph)
        if cls.is_ar():
            min_kr = engine.tau(graph, cls.j0, orb).min()
        elif method == "engine":
            raise engine.NotAR("graph did not certify almost-rational")
    if min_kr is None:
        from . import oracle
        lev = oracle.enumerate_sublevel(graph, orb.k_r, 0)
        min_kr = min(lev.chi_values)
    return min_kr - chi_k(graph, orb.k_r, l)
