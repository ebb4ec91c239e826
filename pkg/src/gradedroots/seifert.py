"""Seifert fibered rational homology spheres with e < 0.

Normalized data: a central Euler number e0 and nu >= 3 legs (alpha_l,
omega_l) with alpha_l >= 2, 1 <= omega_l < alpha_l coprime.  The orbifold
Euler number e = e0 + sum omega_l / alpha_l must be negative; the plumbing
graph is the star whose l-th leg carries the continued fraction of
alpha_l / omega_l.  Derived quantities:

    eps   = (2 - nu + sum 1/alpha_l) / e      ("exponent"),
    alpha = lcm(alpha_l),   o = -e alpha      (order of the central class),
    |H|   = -e alpha_1 ... alpha_nu.

Spin^c structures are the integer solutions (a_0; a_1..a_nu), 0 <= a_l <
alpha_l, a_0 >= 0, of the reduced staircase system

    1 + a_0 + i e0 + sum_l floor((i omega_l + a_l)/alpha_l) <= 0  (i > 0),

and everything downstream -- chi(l'), tau, the Dolgachev-Pinkham count,
and the Reidemeister-Turaev torsion limit -- is a closed form in this
data.  The torsion limit L is computed exactly: the tau-increment
c(i) = 1 + atilde - i e - rho(i) splits into a linear part plus the
alpha-periodic defect rho, each summable as a rational function of t, and
the pole of order two at t = 1 cancels against the equivariant part
P1(t)/|H|; expanding at t = 1 + u in exact series arithmetic leaves the
constant term.  A float partial-sum evaluation with Richardson
extrapolation serves as an independent numeric check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import lens as lens_mod
from .plumbing import build_graph
from .roots import TauFunction
from .series import Series, one_plus_u_pow
from .spinc import distinguished_rep


class PositiveOrbifoldEuler(ValueError):
    """Seifert data with e >= 0 does not bound a negative-definite plumbing."""


class CountMismatch(AssertionError):
    """Spin^c enumeration disagrees with |H|; enumeration window bug."""


class IdentityViolated(AssertionError):
    """An exact identity failed; the message carries the counterexample."""


@dataclass(frozen=True)
class SeifertData:
    e0: int
    legs: tuple  # ((alpha_l, omega_l), ...)

    def __post_init__(self):
        legs = tuple((int(a), int(w)) for a, w in self.legs)
        object.__setattr__(self, "legs", legs)
        if len(legs) < 3:
            raise ValueError("need nu >= 3 legs; use the lens module for nu < 3")
        for a, w in legs:
            if a < 2 or not 1 <= w < a:
                raise ValueError(f"leg ({a},{w}) must satisfy alpha >= 2, 1 <= omega < alpha")
            if math.gcd(a, w) != 1:
                raise ValueError(f"leg ({a},{w}) not coprime")
        if self.e >= 0:
            raise PositiveOrbifoldEuler(f"orbifold Euler number {self.e} >= 0")

    @property
    def nu(self):
        return len(self.legs)

    @cached_property
    def e(self):
        return Fraction(self.e0) + sum(Fraction(w, a) for a, w in self.legs)

    @cached_property
    def eps(self):
        return (2 - self.nu + sum(Fraction(1, a) for a, _ in self.legs)) / self.e

    @cached_property
    def omega_prime(self):
        return tuple(pow(w, -1, a) for a, w in self.legs)

    @cached_property
    def alpha_lcm(self):
        return math.lcm(*(a for a, _ in self.legs))

    @cached_property
    def o(self):
        v = -self.e * self.alpha_lcm
        assert v.denominator == 1 and v > 0
        return int(v)

    @cached_property
    def h_order(self):
        v = -self.e
        for a, _ in self.legs:
            v *= a
        assert v.denominator == 1 and v > 0
        return int(v)

    @cached_property
    def leg_lens(self):
        """Per-leg continued-fraction machinery, reusing the lens tables."""
        return tuple(lens_mod.LensSpace(a, w) for a, w in self.legs)

    @cached_property
    def graph(self):
        """Star-shaped plumbing graph; vertex 0 is the centre, legs follow
        in order with decorations from the alpha/omega expansions."""
        verts = [(0, self.e0)]
        edges = []
        nxt = 1
        for leg in self.leg_lens:
            prev = 0
            for k in leg.cf:
                verts.append((nxt, -k))
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
        return build_graph(verts, edges)

    @cached_property
    def leg_spans(self):
        """Internal vertex index ranges (start, stop) of each leg."""
        spans = []
        nxt = 1
        for leg in self.leg_lens:
            spans.append((nxt, nxt + leg.s))
            nxt += leg.s
        return tuple(spans)

    def describe(self):
        legs = " ".join(f"{a}/{w}" for a, w in self.legs)
        return f"Seifert(e0={self.e0}; {legs})"


def brieskorn(*alphas):
    """The Brieskorn sphere Sigma(a_1, ..., a_nu) as normalized Seifert
    data: the unique solution with e = -1/lcm... more precisely with
    |H| = 1 (integral homology sphere); requires pairwise coprime alphas."""
    alphas = sorted(int(a) for a in alphas)
    assert all(math.gcd(a, b) == 1 for a, b in itertools.combinations(alphas, 2))
    A = math.prod(alphas)
    # solve e0 + sum w_l/alpha_l = -1/A with 1 <= w_l < alpha_l
    # sum over l of w_l * (A/alpha_l) = -1 - e0*A  for some integer e0 < 0
    for e0 in range(-1, -len(alphas) - 2, -1):
        target = -1 - e0 * A
        ws = []
        for a in alphas:
            m = A // a
            w = (target * pow(m, -1, a)) % a
            ws.append(w)
        if sum(w * (A // a) for w, a in zip(ws, alphas)) == target:
            if all(1 <= w < a for w, a in zip(ws, alphas)):
                return SeifertData(e0=e0, legs=tuple(zip(alphas, ws)))
    raise ValueError(f"no normalized data found for Sigma{tuple(alphas)}")


def seifert_graph(data):
    """The star-shaped plumbing graph of the Seifert data."""
    return data.graph


# ---------------------------------------------------------------------------
# spin^c enumeration


@dataclass(frozen=True)
class SeifertSpinc:
    """One solution (a_0; a_1..a_nu) of (SI_red) with its leg expansions."""

    a0: int
    a: tuple
    atilde: Fraction
    E: tuple          # per leg, the coefficient tuples E(a_l)
    pairings: tuple   # pairing vector of l'_[k] on the star graph

    def is_canonical(self):
        return self.a0 == 0 and all(v == 0 for v in self.a)


def _si_red_ok(data, a0, avec):
    """1 + a0 + i e0 + sum floor((i w + a)/alpha) <= 0 for all i > 0;
    violations beyond ceil((1 + a0 + nu)/(-e)) are impossible since the
    left side is < 1 + a0 + nu + i e."""
    i_max = math.ceil(Fraction(1 + a0 + data.nu) / (-data.e))
    for i in range(1, i_max + 1):
        lhs = 1 + a0 + i * data.e0
        for (alpha, omega), a in zip(data.legs, avec):
            lhs += (i * omega + a) // alpha
        if lhs > 0:
            return False
    return True


def _spinc_from_solution(data, a0, avec):
    E = []
    pair = [0] * data.graph.s
    pair[0] = -a0
    for leg, span, al in zip(data.leg_lens, data.leg_spans, avec):
        coeffs = lens_mod.spinc_coeffs(leg, al).E
        E.append(coeffs)
        for off, c in enumerate(coeffs):
            pair[span[0] + off] = -c
    atilde = Fraction(a0) + sum(Fraction(a, alpha)
                                for (alpha, _), a in zip(data.legs, avec))
    return SeifertSpinc(a0=a0, a=tuple(avec), atilde=atilde,
                        E=tuple(E), pairings=tuple(pair))


def enumerate_seifert_spinc(data, verify_reps=True):
    """All solutions of (SI_red), in lexicographic (a0, a_1..a_nu) order.

    The count must equal |H| = -e alpha_1...alpha_nu (CountMismatch
    otherwise); with ``verify_reps`` each solution's l' is checked to be
    the distinguished representative of its orbit on the star graph."""
    out = []
    a0_cap = -1 - data.e0
    for a0 in range(a0_cap + 1):
        for avec in itertools.product(*(range(a) for a, _ in data.legs)):
            if _si_red_ok(data, a0, avec):
                out.append(_spinc_from_solution(data, a0, avec))
    if len(out) != data.h_order:
        raise CountMismatch(
            f"{data.describe()}: found {len(out)} solutions, |H| = {data.h_order}")
    if verify_reps:
        g = data.graph
        for sp in out:
            l0 = g.dual_from_pairings(sp.pairings)
            if distinguished_rep(g, l0) != l0:
                raise CountMismatch(
                    f"{data.describe()}: {sp.a0};{sp.a} is not a minimal representative")
    return out


def lprime_vector(data, sp):
    """l'_[k] as a DualVector on the star graph."""
    return data.graph.dual_from_pairings(sp.pairings)


# ---------------------------------------------------------------------------
# closed forms


def seifert_chi_lprime(data, sp):
    """chi(l'_[k]) from

        -chi = sum_{l=0}^nu a_l/2 + eps*atilde/2 + atilde^2/(2e)
               - sum_l sum_{i=1}^{a_l} {i omega'_l / alpha_l}."""
    at = sp.atilde
    neg = Fraction(sp.a0, 2) + sum(Fraction(a, 2) for a in sp.a)
    neg += data.eps * at / 2 + at * at / (2 * data.e)
    for (alpha, _), wp, a in zip(data.legs, data.omega_prime, sp.a):
        neg -= Fraction(sum((i * wp) % alpha for i in range(1, a + 1)), alpha)
    return -neg


def seifert_k2s(data):
    """K^2 + s = eps^2 e + e + 5 - 12 sum_l s(omega_l, alpha_l)."""
    val = data.eps ** 2 * data.e + data.e + 5
    for alpha, omega in data.legs:
        val -= 12 * lens_mod.dedekind_sum(omega, alpha)
    return val


def delta_tau(data, sp, i):
    """tau(i+1) - tau(i) = 1 + a0 - i e0 + sum_l floor((-i omega + a)/alpha)."""
    v = 1 + sp.a0 - i * data.e0
    for (alpha, omega), a in zip(data.legs, sp.a):
        v += (-i * omega + a) // alpha
    return v


def tau_stop_index(data, sp):
    """i* = max(0, ceil((nu - 1 - a0) / (-e))): beyond it every increment
    is positive, since delta_tau(i) > 1 + a0 - nu - i e."""
    return max(0, math.ceil(Fraction(data.nu - 1 - sp.a0) / (-data.e)))


def seifert_tau(data, sp):
    """Certified tau function of the orbit, from the closed-form increments."""
    stop = tau_stop_index(data, sp)
    vals = [0]
    for i in range(stop):
        vals.append(vals[-1] + delta_tau(data, sp, i))
    return TauFunction(values=tuple(vals), certified=True)


def x_closed_form(data, sp, i):
    """The cycle x(i) by the per-leg ceiling recursion

        v_1 = ceil((i omega - a)/alpha),
        v_j = ceil((v_{j-1} n_{j+1,s} - atilde_j) / n_{j,s}),

    where atilde_j = sum_{t>=j} n_{t+1,s} a_t on each leg."""
    coeffs = [0] * data.graph.s
    coeffs[0] = i
    for leg, span, E in zip(data.leg_lens, data.leg_spans, sp.E):
        s = leg.s
        atil = [sum(leg.n(t + 2, s) * E[t] for t in range(j, s)) for j in range(s)]
        prev = i
        for j in range(1, s + 1):
            num = prev * leg.n(j + 1, s) - atil[j - 1]
            v = -((-num) // leg.n(j, s))  # ceil for positive denominator
            coeffs[span[0] + j - 1] = v
            prev = v
    from .plumbing import LatticeVector
    return LatticeVector(coeffs)


def dp_invariant(data):
    """DP = sum_{i>=0} max(0, -1 + i e0 - sum_l floor(-i omega/alpha)),
    the canonical-orbit drop count; equals chi(HF+(-M, can)) - min chi."""
    can = _spinc_from_solution(data, 0, (0,) * data.nu)
    stop = tau_stop_index(data, can)
    return sum(max(0, -delta_tau(data, can, i)) for i in range(stop + 1))


# ---------------------------------------------------------------------------
# exact torsion limit


def seifert_torsion_limit(data, sp):
    """L = lim_{t->1} (P_[k](t) - P1(t)/|H|), exactly.

    P_[k](t) = sum_i c(i) t^{o i + alpha atilde} with c(i) the tau
    increment; with rho(i) = sum_l {(-i omega_l + a_l)/alpha_l} (period
    alpha) this telescopes to

        t^{alpha atilde} [ (1+atilde) S0 - e z S0^2 - Q(z) / (1 - z^alpha) ],

    z = t^o, S0 = 1/(1-z), Q(z) = sum_{r<alpha} rho(r) z^r, while
    P1(t) = (t^alpha - 1)^{nu-2} / prod_l (t^{alpha/alpha_l} - 1).
    Both sides have a pole of order two at t = 1 which cancels in the
    difference; expanding at t = 1 + u returns the constant coefficient.
    """
    alpha = data.alpha_lcm
    o = data.o
    at = sp.atilde
    alpha_at = alpha * at
    assert alpha_at.denominator == 1, "alpha * atilde must be integral"
    alpha_at = int(alpha_at)

    R = 8  # guard digits of relative series precision
    z = one_plus_u_pow(o, R + 1)
    one_minus_z = Series.const(1, R + 1) - z          # valuation 1
    s0 = one_minus_z.inverse()                        # valuation -1
    qpoly = Series.zero(R + 1)
    for r in range(alpha):
        rho = Fraction(0)
        for (al, om), a in zip(data.legs, sp.a):
            rho += Fraction((-r * om + a) % al, al)
        if rho:
            qpoly = qpoly + one_plus_u_pow(o * r, R + 1).scaled(rho)
    one_minus_zalpha = Series.const(1, R + 1) - one_plus_u_pow(o * alpha, R + 1)
    p_bracket = (s0.scaled(1 + at)
                 - (z * (s0 * s0)).scaled(data.e)
                 - qpoly * one_minus_zalpha.inverse())
    p_series = one_plus_u_pow(alpha_at, R + 1) * p_bracket

    num = one_plus_u_pow(alpha, R + 1) - Series.const(1, R + 1)
    p1 = num.power(data.nu - 2)
    for al, _ in data.legs:
        den = one_plus_u_pow(alpha // al, R + 1) - Series.const(1, R + 1)
        p1 = p1 * den.inverse()

    diff = p_series - p1.scaled(Fraction(1, data.h_order))
    assert diff.coeff(-2) == 0 and diff.coeff(-1) == 0, \
        "pole of P - P1/|H| failed to cancel"
    return diff.coeff(0)


def _float_dtype():
    ld = np.longdouble
    return ld if np.finfo(ld).eps < 1e-18 else None


def torsion_limit_numeric(data, sp, hs=(1e-3, 1e-4, 1e-5)):
    """Partial-sum evaluation of P_[k](t) - P1(t)/|H| at t = 1 - h for the
    given h values, extrapolated to h = 0 (Neville through the actual
    sample nodes).  Independent of the exact series route.

    Both P (float partial sums) and P1 (mpmath) are evaluated at the
    identical binary value of t; near t = 1 they are each of size 1/h^2,
    so even a one-ulp disagreement in t would not cancel correctly."""
    import mpmath as mp
    alpha, o = data.alpha_lcm, data.o
    alpha_at = int(alpha * sp.atilde)
    omegas = np.array([w for _, w in data.legs], dtype=np.int64)
    alphas = np.array([a for a, _ in data.legs], dtype=np.int64)
    avec = np.array(sp.a, dtype=np.int64)

    pts = []
    for h in hs:
        t = float(1.0 - h)
        n_terms = int(60.0 / (o * h)) + 8
        i = np.arange(n_terms, dtype=np.int64)
        c = 1 + sp.a0 - i * data.e0
        for l in range(data.nu):
            c = c + (-i * omegas[l] + avec[l]) // alphas[l]
        ld = _float_dtype()
        if ld is not None:
            logt = np.log(ld(t))
            weights = np.exp((o * i.astype(ld) + ld(alpha_at)) * logt)
            p_val = float((c.astype(ld) * weights).sum())
        else:  # pragma: no cover - platforms without extended doubles
            logt = math.log(t)
            p_val = math.fsum(int(ci) * math.exp((o * ii + alpha_at) * logt)
                              for ci, ii in zip(c.tolist(), i.tolist()))
        with mp.workdps(50):
            tm = mp.mpf(t)  # exact binary conversion: same t as above
            p1 = (tm ** alpha - 1) ** (data.nu - 2)
            for al, _ in data.legs:
                p1 /= tm ** (alpha // al) - 1
            p1_val = float(p1 / data.h_order)
            h_eff = float(1 - tm)
        pts.append((h_eff, p_val - p1_val))
    # Neville extrapolation of the polynomial through pts to h = 0
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    for level in range(1, len(pts)):
        for k in range(len(pts) - level):
            ys[k] = (xs[k + level] * ys[k] - xs[k] * ys[k + 1]) / (xs[k + level] - xs[k])
    return ys[0]


# ---------------------------------------------------------------------------
# the sw identity suite


def verify_sw_identity(data, check_numeric=True, numeric_tol=1e-6):
    """Exact verification of the torsion / Casson-Walker / Heegaard Floer
    identity on every spin^c orbit of the Seifert manifold:

        L(orbit) = lambda(M)/|H| + (k_r^2 + s)/8,

    where L is the exact torsion limit; equivalently T(1) - lambda/|H| =
    chi(HF+(-M)) - min tau + (k_r^2+s)/8.  Also checks the global sum
    lambda(M) = sum_orbits (chi(HF+(M,[k])) - d(M,[k])/2) and, optionally,
    the Richardson-extrapolated numeric limit within ``numeric_tol``.
    Returns a per-orbit report; raises IdentityViolated on any mismatch."""
    from .plumbing import casson_walker, k_squared_plus_s
    g = data.graph
    lam = casson_walker(g)
    k2s = k_squared_plus_s(g)
    k2s_closed = seifert_k2s(data)
    if k2s != k2s_closed:
        raise IdentityViolated(
            f"{data.describe()}: K^2+s closed form {k2s_closed} != plumbing {k2s}")
    rows = []
    global_sum = Fraction(0)
    for sp in enumerate_seifert_spinc(data):
        chi_l = seifert_chi_lprime(data, sp)
        kr2s = k2s - 8 * chi_l
        tau_f = seifert_tau(data, sp)
        vals = tau_f.values
        min_tau = min(vals)
        rank_red = min_tau + sum(max(0, vals[i] - vals[i + 1])
                                 for i in range(len(vals) - 1))
        d = kr2s / 4 - 2 * min_tau
        L = seifert_torsion_limit(data, sp)
        expect = lam / data.h_order + kr2s / 8
        if L != expect:
            raise IdentityViolated(
                f"{data.describe()} orbit {sp.a0};{sp.a}: torsion limit {L} != "
                f"lambda/|H| + (k_r^2+s)/8 = {expect}")
        torsion = L + rank_red - min_tau
        if torsion - lam / data.h_order != rank_red - min_tau + kr2s / 8:
            raise IdentityViolated(f"{data.describe()} orbit {sp.a0};{sp.a}: sw identity")
        if check_numeric:
            approx = torsion_limit_numeric(data, sp)
            if abs(approx - float(L)) > numeric_tol:
                raise IdentityViolated(
                    f"{data.describe()} orbit {sp.a0};{sp.a}: numeric limit "
                    f"{approx} vs exact {float(L)}")
        global_sum += -rank_red - d / 2
        rows.append({"a0": sp.a0, "a": sp.a, "chi_lprime": chi_l, "kr2s": kr2s,
                     "min_tau": min_tau, "rank_red": rank_red, "d": d,
                     "torsion": torsion, "limit": L})
    if global_sum != lam:
        raise IdentityViolated(
            f"{data.describe()}: sum over orbits {global_sum} != lambda {lam}")
    return {"data": data.describe(), "lambda": lam, "k2s": k2s,
            "h_order": data.h_order, "orbits": rows, "ok": True}
