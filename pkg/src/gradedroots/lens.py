"""Lens spaces L(p, q) in closed form.

The negative continued fraction p/q = [k_1, ..., k_s] (all k_j >= 2) gives
the chain plumbing graph with decorations -k_j.  All invariants below are
evaluated exactly from the numerator table

    n_{ij} = numerator of [k_i, ..., k_j],   n_{i,i-1} = 1,  n_{ij} = 0
    for j < i - 1,     n_{ij} = k_i n_{i+1,j} - n_{i+2,j},

with n_{1s} = p, n_{2s} = q and q' = n_{1,s-1} the inverse of q mod p.

Spin^c structures correspond to a in {0..p-1} through [k] = K + 2(-a g_s + L);
the minimal representative is l' = -(a_1 g_1 + ... + a_s g_s) where the
nonnegative coefficient vector E(a) solves the staircase inequalities (SI).
Closed forms: chi(l'), d, the Casson-Walker invariant p s(q,p)/2, and the
Reidemeister-Turaev torsion (p-1)/(4p) - s(q,p) - chi(l'), where s(q,p) is
the Dedekind sum.  A Fourier sum over p-th roots of unity provides an
independent numeric check of the torsion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .plumbing import build_graph


class NotCoprime(ValueError):
    """gcd(p, q) must be 1."""


class RangeError(ValueError):
    """Argument outside its required range."""


# ---------------------------------------------------------------------------
# negative continued fractions


def neg_cf(p, q):
    """Hirzebruch-Jung expansion p/q = k_1 - 1/(k_2 - 1/(... - 1/k_s)).

    Unique with all k_j >= 2; requires 0 < q < p coprime."""
    p, q = int(p), int(q)
    if not 0 < q < p:
        raise RangeError(f"need 0 < q < p, got q={q}, p={p}")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p},{q}) != 1")
    ks = []
    while q:
        k = -((-p) // q)  # ceil(p / q)
        ks.append(k)
        p, q = q, k * q - p
    assert all(k >= 2 for k in ks)
    return ks


def cf_value(ks):
    """Evaluate [k_1, ..., k_s] as an exact fraction."""
    v = None
    for k in reversed(list(ks)):
        v = Fraction(k) if v is None else k - 1 / v
    return v


# ---------------------------------------------------------------------------
# the lens space and its tables


@dataclass(frozen=True)
class LensSpace:
    p: int
    q: int

    def __post_init__(self):
        if not 0 < self.q < self.p:
            raise RangeError(f"need 0 < q < p, got q={self.q}, p={self.p}")
        if math.gcd(self.p, self.q) != 1:
            raise NotCoprime(f"gcd({self.p},{self.q}) != 1")

    @cached_property
    def cf(self):
        return tuple(neg_cf(self.p, self.q))

    @property
    def s(self):
        return len(self.cf)

    @cached_property
    def _ntab(self):
        """n[i][j] for 1 <= i <= s+2, i-2 <= j <= s, flattened as a dict-free
        list of rows indexed from i-2."""
        s = self.s
        k = (0,) + self.cf  # 1-based
        n = [[0] * (s + 1) for _ in range(s + 3)]  # n[i][j], 0-padded

        def setn(i, j, v):
            n[i][j] = v

        for i in range(s + 2, 0, -1):
            for j in range(max(i - 1, 0), s + 1):
                if j == i - 1:
                    setn(i, j, 1)
                elif j < i - 1:
                    setn(i, j, 0)
                else:
                    setn(i, j, k[i] * n[i + 1][j] - n[i + 2][j])
        return n

    def n(self, i, j):
        """Numerator of [k_i, ..., k_j]; 1 for j = i-1, 0 for j < i-1."""
        if j < i - 1:
            return 0
        if j == i - 1:
            return 1
        return self._ntab[i][j]

    @cached_property
    def q_prime(self):
        qp = self.n(1, self.s - 1)
        assert 0 < qp < self.p and (self.q * qp) % self.p == 1
        return qp

    def __str__(self):
        return f"L({self.p},{self.q})"

    @cached_property
    def graph(self):
        return build_graph([(i, -k) for i, k in enumerate(self.cf)],
                           [(i, i + 1) for i in range(self.s - 1)])

    @cached_property
    def _e_table(self):
        """E(a) for every a, generated downward from E(p-1); at each step
        either the last nonzero entry drops by one, or the block after it
        refills with (k_i - 1, k_{i+1} - 2, ..., k_s - 2)."""
        s, k = self.s, self.cf
        cur = [k[0] - 1] + [kj - 2 for kj in k[1:]]
        out = [None] * self.p
        out[self.p - 1] = tuple(cur)
        for a in range(self.p - 1, 0, -1):
            i = max(t for t in range(s) if cur[t] != 0)  # exists while a > 0
            cur[i] -= 1
            if i + 1 < s:
                cur[i + 1] = k[i + 1] - 1
                for t in range(i + 2, s):
                    cur[t] = k[t] - 2
            out[a - 1] = tuple(cur)
        assert all(v == 0 for v in out[0])
        return tuple(out)


@dataclass(frozen=True)
class SpincCoeffs:
    """The coefficient system E(a) = (a_1..a_s) of l'_[-a g_s]."""

    a: int
    E: tuple


def generalized_cf_string(lens, a):
    """Display-only rendering of a/p as the staircase fraction

        a/p = (a_1 + (a_2 + ... (a_s / r_s) ...) / r_2) / r_1,

    with r_i = n_{is} / n_{i+1,s}; every partial fraction is < 1, which is
    what makes the digits E(a) unique.  Not used for computation."""
    E = spinc_coeffs(lens, a).E
    s = lens.s
    expr = None
    for i in range(s, 0, -1):
        r = f"{lens.n(i, s)}/{lens.n(i + 1, s)}"
        inner = str(E[i - 1]) if expr is None else f"({E[i - 1]} + {expr})"
        expr = f"{inner}/({r})"
    return f"{a}/{lens.p} = {expr}"


def spinc_coeffs(lens, a):
    """E(a) by the floor recursion, cross-checked against the descending
    generation, with the staircase inequalities (SI) verified:

        a_i = floor((a - sum_{t<i} n_{t+1,s} a_t) / n_{i+1,s});
        sum_{t>=i} n_{t+1,s} a_t < n_{is} for every i;
        a = sum_t n_{t+1,s} a_t.
    """
    if not 0 <= a < lens.p:
        raise RangeError(f"need 0 <= a < p, got a={a}")
    s = lens.s
    rem = a
    E = []
    for i in range(1, s + 1):
        ai = rem // lens.n(i + 1, s)
        E.append(ai)
        rem -= ai * lens.n(i + 1, s)
    E = tuple(E)
    assert E == lens._e_table[a], "floor and descending generations disagree"
    assert sum(lens.n(t + 2, s) * E[t] for t in range(s)) == a
    for i in range(1, s + 1):
        assert sum(lens.n(t + 1, s) * E[t - 1] for t in range(i, s + 1)) < lens.n(i, s)
    return SpincCoeffs(a=a, E=E)


def lprime_of(lens, a):
    """The distinguished representative l'_[-a g_s] = -sum a_j g_j as a
    DualVector in b-coordinates."""
    E = spinc_coeffs(lens, a).E
    return lens.graph.dual_from_pairings([-aj for aj in E])


# ---------------------------------------------------------------------------
# Dedekind sums


def dedekind_sum_direct(q, p):
    """s(q, p) = sum_l ((l/p))((ql/p)) by direct summation (integer core)."""
    p, q = int(p), int(q)
    if p < 1 or math.gcd(p, q) != 1:
        raise NotCoprime(f"need p >= 1 and gcd(q,p) = 1, got q={q}, p={p}")
    total = 0  # accumulates 4 p^2 * s(q, p)
    for l in range(1, p):
        r = (q * l) % p
        if r:
            total += (2 * l - p) * (2 * r - p)
    return Fraction(total, 4 * p * p)


def dedekind_sum(q, p):
    """s(q, p) via reciprocity:

        s(q,p) + s(p,q) = -1/4 + (p/q + q/p + 1/(pq)) / 12,

    with s(q + p, p) = s(q, p) and s(1, 1) = 0."""
    p = int(p)
    q = int(q) % p if p > 1 else 0
    if p < 1 or (p > 1 and math.gcd(p, q) != 1):
        raise NotCoprime(f"need gcd(q,p) = 1, got q={q}, p={p}")
    if p == 1:
        return Fraction(0)
    sign = Fraction(1)
    total = Fraction(0)
    while True:
        if q == 1:
            # s(1, p) = (p-1)(p-2) / (12p)
            total += sign * Fraction((p - 1) * (p - 2), 12 * p)
            return total
        total += sign * (Fraction(-1, 4)
                         + (Fraction(p, q) + Fraction(q, p) + Fraction(1, p * q)) / 12)
        sign = -sign
        p, q = q, p % q


# ---------------------------------------------------------------------------
# closed-form invariants


def k2s_quarter(lens):
    """(K^2 + s)/4 = (p-1)/(2p) - 3 s(q,p)."""
    return Fraction(lens.p - 1, 2 * lens.p) - 3 * dedekind_sum(lens.q, lens.p)


def chi_lprime(lens, a):
    """chi(l'_[-a g_s]) = a(1-p)/(2p) + sum_{j=1}^a {j q'/p}."""
    if not 0 <= a < lens.p:
        raise RangeError(f"need 0 <= a < p, got a={a}")
    p, qp = lens.p, lens.q_prime
    frac_sum = sum((j * qp) % p for j in range(1, a + 1))
    return Fraction(a * (1 - p), 2 * p) + Fraction(frac_sum, p)


def chi_lprime_table(lens):
    """chi(l') for every a at once (cumulative fractional-part sums)."""
    p, qp = lens.p, lens.q_prime
    out = []
    acc = 0
    for a in range(p):
        if a:
            acc += (a * qp) % p
        out.append(Fraction(a * (1 - p), 2 * p) + Fraction(acc, p))
    return out


def casson_walker(lens):
    """lambda(L(p,q)) = p s(q,p) / 2."""
    return Fraction(lens.p) * dedekind_sum(lens.q, lens.p) / 2


def casson_walker_chain_formula(lens):
    """The plumbing formula -(24/|H|) lambda = sum e_j + 3s + sum (2-d_j) B^{-1}_{jj}
    evaluated through the chain closed form B^{-1}_{ij} = -n_{1,i-1} n_{j+1,s} / p."""
    p, s = lens.p, lens.s
    rhs = Fraction(sum(-k for k in lens.cf) + 3 * s)
    for j in range(1, s + 1):
        deg = 1 if j in (1, s) else 2
        if s == 1:
            deg = 0
        binv_jj = Fraction(-lens.n(1, j - 1) * lens.n(j + 1, s), p)
        rhs += (2 - deg) * binv_jj
    return -Fraction(p, 24) * rhs


def torsion(lens, a):
    """T_{M,[-a g_s]}(1) = (p-1)/(4p) - s(q,p) - chi(l')."""
    return (Fraction(lens.p - 1, 4 * lens.p) - dedekind_sum(lens.q, lens.p)
            - chi_lprime(lens, a))


def torsion_fourier(lens, a, dps=50):
    """Numeric oracle: (1/p) sum over p-th roots of unity xi != 1 of
    xi^{-a} / ((xi - 1)(xi^q - 1)), at ``dps`` decimal digits."""
    import mpmath as mp
    p, q = lens.p, lens.q
    with mp.workdps(dps):
        total = mp.mpc(0)
        for j in range(1, p):
            xi = mp.e ** (2j * mp.pi * j / p)
            total += xi ** (-a) / ((xi - 1) * (xi ** q - 1))
        val = total / p
        assert abs(mp.im(val)) < mp.mpf(10) ** (-dps + 10)
        return float(mp.re(val))


def torsion_fourier_all(lens):
    """The same Fourier sums for every a at once (double precision FFT)."""
    p, q = lens.p, lens.q
    j = np.arange(1, p)
    xi = np.exp(2j * np.pi * j / p)
    f = np.zeros(p, dtype=complex)
    f[1:] = 1.0 / ((xi - 1.0) * (xi ** q - 1.0))
    vals = np.fft.fft(f) / p
    return vals.real


@dataclass(frozen=True)
class LensInvariants:
    a: int
    chi: Fraction
    d: Fraction
    torsion: Fraction
    lam: Fraction          # Casson-Walker of the lens space
    sw_osz: Fraction       # chi(HF+) - d/2 with vanishing reduced part
    sw_tcw: Fraction       # -torsion + lambda / |H|


def lens_invariants(lens, a, check_numeric=True, numeric_tol=1e-9):
    """All closed-form invariants of (L(p,q), [-a g_s]).

    The sw identity T - lambda/|H| = d/2 is asserted exactly; with
    ``check_numeric`` the Fourier-sum torsion must agree within
    ``numeric_tol``."""
    chi = chi_lprime(lens, a)
    d = k2s_quarter(lens) - 2 * chi
    T = torsion(lens, a)
    lam = casson_walker(lens)
    assert T - lam / lens.p == d / 2, "sw identity failed"
    if check_numeric:
        approx = torsion_fourier(lens, a)
        assert abs(approx - float(T)) < numeric_tol, \
            f"Fourier torsion {approx} vs exact {float(T)}"
    return LensInvariants(a=a, chi=chi, d=d, torsion=T, lam=lam,
                          sw_osz=-d / 2, sw_tcw=-T + lam / lens.p)


# ---------------------------------------------------------------------------
# exhaustive verification (used by tests and the CLI `verify` command)


class LensIdentityError(AssertionError):
    """A lens identity failed; the message carries the counterexample."""


def verify_lens_sweep(p_max, fourier_tol=1e-9, progress=None):
    """Exact identity sweep over all 2 <= p <= p_max, all q, all a.

    Checks, per (p, q): the n-table symmetry, q q' = 1 mod p, both E(a)
    generation schemes with (SI), Lemma-style floor identities
    [a q'/p] = sum_t a_t n_{t+1,s-1}, the sw identity T - lambda/p = d/2,
    sum_a T = 0 and sum_a chi = (p-1)/4 - p s(q,p), the chain-formula
    Casson-Walker against p s(q,p)/2, and the FFT torsion against the
    closed form within ``fourier_tol``.  Returns counters."""
    pairs = 0
    orbits = 0
    for p in range(2, p_max + 1):
        for q in range(1, p):
            if math.gcd(p, q) != 1:
                continue
            lens = LensSpace(p, q)
            s = lens.s
            ctx = f"L({p},{q})"
            if lens.n(1, s) != p or lens.n(2, s) != q:
                raise LensIdentityError(f"{ctx}: n-table endpoints")
            for i in range(1, s + 1):
                for jj in range(i, s + 1):
                    if lens.n(i, jj) != lens.cf[jj - 1] * lens.n(i, jj - 1) - lens.n(i, jj - 2):
                        raise LensIdentityError(f"{ctx}: n symmetry at ({i},{jj})")
            sq = dedekind_sum(q, p)
            k2q = Fraction(p - 1, 2 * p) - 3 * sq
            lam = Fraction(p) * sq / 2
            if casson_walker_chain_formula(lens) != lam:
                raise LensIdentityError(f"{ctx}: Casson-Walker chain formula")
            chis = chi_lprime_table(lens)
            qp = lens.q_prime
            etab = lens._e_table
            sum_T = Fraction(0)
            t_exact = []
            for a in range(p):
                E = etab[a]
                if spinc_coeffs(lens, a).E != E:
                    raise LensIdentityError(f"{ctx}: E({a}) generation mismatch")
                floor_id = sum(E[t - 1] * lens.n(t + 1, s - 1) for t in range(1, s + 1))
                if floor_id != (a * qp) // p:
                    raise LensIdentityError(f"{ctx}: floor identity at a={a}")
                frac_id = sum(E[t - 1] * lens.n(1, t - 1) for t in range(1, s + 1))
                if frac_id != (a * qp) % p:
                    raise LensIdentityError(f"{ctx}: fractional identity at a={a}")
                chi = chis[a]
                d = k2q - 2 * chi
                T = Fraction(p - 1, 4 * p) - sq - chi
                if T - lam / p != d / 2:
                    raise LensIdentityError(f"{ctx}: sw identity at a={a}")
                sum_T += T
                t_exact.append(T)
                orbits += 1
            if sum_T != 0:
                raise LensIdentityError(f"{ctx}: sum of torsions != 0")
            if sum(chis) != Fraction(p - 1, 4) - p * sq:
                raise LensIdentityError(f"{ctx}: sum of chi")
            approx = torsion_fourier_all(lens)
            err = max(abs(approx[a] - float(t_exact[a])) for a in range(p))
            if err > fourier_tol:
                raise LensIdentityError(f"{ctx}: Fourier torsion off by {err}")
            pairs += 1
        if progress is not None:
            progress(p)
    return {"pairs": pairs, "orbits": orbits}
