"""Abstract graded roots and their Z[U]-modules.

A graded root is an infinite tree R with an integer grading chi such that
every edge changes chi by exactly one, no vertex has two neighbours above
it, chi is bounded below with finite level sets, and all sufficiently high
levels contain a single vertex (the root ends in one infinite ray).

We store the finite interesting part: all vertices with chi <= top_level.
When ``truncated`` is False the object above top_level is certified to be
the single ray, so the data determines the infinite root exactly; when
True only the displayed part is known.

The module H(R, chi) of a graded root decomposes as one infinite tower
T+[2*chi(v1)] plus finite towers T[2*chi(v_k)](chi(w_k) - chi(v_k)) read
off a greedy ordering of the local minima; see :func:`module_of_root`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class EmptyTau(ValueError):
    """A tau function needs at least one value."""


class ConditionViolated(ValueError):
    """The (n_i, n_ij) data violates a merge-consistency condition."""


@dataclass(frozen=True)
class TauFunction:
    """Finite list of tau values tau(0..m).

    ``certified`` asserts that the (infinite) continuation satisfies
    tau(i+1) >= tau(i) for every i >= m, so the finite values determine the
    graded root completely.
    """

    values: tuple
    certified: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise EmptyTau("tau has no values")

    def min(self):
        return min(self.values)


def _fmt_q(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class GradedRoot:
    """Finite presentation of a graded root.

    ``chi[v]`` is the grading of vertex v, ``edges`` joins vertices on
    adjacent levels, ``top_level`` is the highest stored level.  Vertex ids
    are construction order; structural equality goes through
    :meth:`canonical_key`, which is invariant under relabelling.
    """

    chi: tuple
    edges: tuple
    top_level: int
    truncated: bool = False

    def __post_init__(self):
        chi = self.chi
        if not chi:
            raise ValueError("a graded root needs at least one vertex")
        if max(chi) > self.top_level:
            raise ValueError("vertex above top_level")
        up = [0] * len(chi)
        for u, v in self.edges:
            if abs(chi[u] - chi[v]) != 1:
                raise ValueError(f"edge ({u},{v}) joins non-adjacent levels")
            hi = u if chi[u] > chi[v] else v
            lo = v if hi == u else u
            up[lo] += 1
        for v, n in enumerate(up):
            if chi[v] < self.top_level and n != 1:
                raise ValueError(f"vertex {v} has {n} upward edges, expected 1")
            if chi[v] == self.top_level and n != 0:
                raise ValueError(f"top-level vertex {v} has an upward edge")
        if not self.truncated and sum(1 for c in chi if c == self.top_level) != 1:
            raise ValueError("a non-truncated root must end in a single ray vertex")

    # -- structure ----------------------------------------------------------

    @property
    def parents(self):
        """parent[v] = unique neighbour one level up (None for top vertices)."""
        par = [None] * len(self.chi)
        for u, v in self.edges:
            lo, hi = (u, v) if self.chi[u] < self.chi[v] else (v, u)
            par[lo] = hi
        return par

    @property
    def children(self):
        kids = [[] for _ in self.chi]
        for v, p in enumerate(self.parents):
            if p is not None:
                kids[p].append(v)
        return kids

    def local_minima(self):
        """Vertices with no neighbour below; these are the leaves V_1."""
        kids = self.children
        return [v for v in range(len(self.chi)) if not kids[v]]

    def min_chi(self):
        return min(self.chi)

    def canonical_key(self):
        """Label-independent encoding: each component is encoded bottom-up
        as nested sorted tuples of (chi, child encodings)."""
        kids = self.children
        tops = sorted((v for v in range(len(self.chi)) if self.parents[v] is None),
                      key=lambda v: self.chi[v])
        enc = [None] * len(self.chi)
        for top in tops:
            # iterative post-order to keep deep rays off the call stack
            stack = [(top, False)]
            while stack:
                v, done = stack.pop()
                if done:
                    enc[v] = (self.chi[v], tuple(sorted(enc[c] for c in kids[v])))
                else:
                    stack.append((v, True))
                    stack.extend((c, False) for c in kids[v])
        return (self.truncated, self.top_level, tuple(sorted(enc[t] for t in tops)))

    def __eq__(self, other):
        return isinstance(other, GradedRoot) and self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def truncate(self, level):
        """The root seen up to ``level`` only, marked truncated.

        Cuts structure above ``level``; if ``level`` exceeds the stored top
        of a non-truncated root, the certified single ray is padded up to
        ``level`` so that truncations of equal roots compare equal.
        """
        if level >= self.top_level:
            if level == self.top_level:
                return GradedRoot(chi=self.chi, edges=self.edges,
                                  top_level=level, truncated=True)
            if self.truncated:
                raise ValueError("cannot extend a truncated root upward")
            chi = list(self.chi)
            edges = list(self.edges)
            v = next(i for i, c in enumerate(chi) if c == self.top_level)
            for n in range(self.top_level + 1, level + 1):
                chi.append(n)
                edges.append((v, len(chi) - 1))
                v = len(chi) - 1
            return GradedRoot(chi=tuple(chi), edges=tuple(edges),
                              top_level=level, truncated=True)
        keep = [v for v, c in enumerate(self.chi) if c <= level]
        if not keep:
            raise ValueError("truncation level below the whole root")
        remap = {v: i for i, v in enumerate(keep)}
        edges = tuple((remap[u], remap[v]) for u, v in self.edges
                      if u in remap and v in remap)
        return GradedRoot(chi=tuple(self.chi[v] for v in keep), edges=edges,
                          top_level=level, truncated=True)

    def __repr__(self):
        kind = "truncated" if self.truncated else "stabilized"
        return (f"GradedRoot({len(self.chi)} vertices, min={self.min_chi()}, "
                f"top={self.top_level}, {kind})")


def _trim_ray(chi, edges, top_level):
    """Drop redundant single-ray vertices from the top so the stored
    top_level is minimal; the infinite ray marker covers what is removed."""
    chi = list(chi)
    edges = {tuple(sorted(e)) for e in edges}
    while len(chi) > 1:
        top = [v for v, c in enumerate(chi) if c == top_level]
        if len(top) != 1:
            break
        t = top[0]
        incident = [e for e in edges if t in e]
        if len(incident) != 1:
            break
        edges.remove(incident[0])
        del chi[t]
        edges = {tuple(sorted((x - (x > t), y - (y > t)))) for x, y in edges}
        top_level -= 1
    return tuple(chi), tuple(sorted(edges)), top_level


def make_root(chi, edges, top_level, truncated):
    """Build a :class:`GradedRoot`, normalizing away a redundant top ray."""
    if not truncated:
        chi, edges, top_level = _trim_ray(tuple(chi), tuple(edges), top_level)
    return GradedRoot(chi=tuple(chi), edges=tuple(sorted(tuple(sorted(e)) for e in edges)),
                      top_level=top_level, truncated=truncated)


def ray_root(n):
    """R_n: the single infinite ray starting at level n."""
    return GradedRoot(chi=(n,), edges=(), top_level=n, truncated=False)


# ---------------------------------------------------------------------------
# constructions


def root_from_tau(tau, truncate_at=None):
    """The graded root R_tau of a tau function.

    Vertices at level n are the maximal runs of consecutive indices i with
    tau(i) <= n; a run at level n sits inside a unique run at level n+1.
    With a certified tau the result is the exact infinite root; otherwise
    (or when ``truncate_at`` is given) the result is marked truncated.
    """
    if not isinstance(tau, TauFunction):
        tau = TauFunction(tuple(tau), certified=True)
    vals = tau.values
    lo = min(vals)
    top = max(vals)
    truncated = not tau.certified
    if truncate_at is not None:
        if truncate_at < lo:
            raise ValueError("truncation level below min tau")
        top = min(top, truncate_at)
        truncated = True

    chi = []
    edges = []
    prev_runs = {}  # start index of run -> vertex id at previous level
    for n in range(lo, top + 1):
        runs = []
        start = None
        for i, v in enumerate(vals):
            if v <= n and start is None:
                start = i
            elif v > n and start is not None:
                runs.append((start, i - 1))
                start = None
        if start is not None:
            runs.append((start, len(vals) - 1))
        cur = {}
        for a, b in runs:
            vid = len(chi)
            chi.append(n)
            cur[(a, b)] = vid
            for (pa, pb), pid in prev_runs.items():
                if a <= pa and pb <= b:
                    edges.append((pid, vid))
        prev_runs = cur
    if truncate_at is not None and truncate_at > top:
        # pad the single ray up to the requested level for uniform comparison
        assert len(prev_runs) == 1
        vid = list(prev_runs.values())[0]
        for n in range(top + 1, truncate_at + 1):
            chi.append(n)
            edges.append((vid, len(chi) - 1))
            vid = len(chi) - 1
        top = truncate_at
    return make_root(chi, edges, top, truncated)


def root_from_minima(n_i, n_ij):
    """The graded root R({n_i}, {n_ij}) glued from rays.

    ``n_i`` lists the starting levels, ``n_ij`` is the full symmetric merge
    matrix; rays i and j are identified at all levels >= n_ij.  Conditions
    checked: n_ii = n_i, n_ij >= max(n_i, n_j), and
    n_jk <= max(n_ij, n_ik) for all triples.
    """
    m = len(n_i)
    if m == 0:
        raise ConditionViolated("empty index set")
    n_i = [int(v) for v in n_i]
    N = [[int(n_ij[i][j]) for j in range(m)] for i in range(m)]
    for i in range(m):
        if N[i][i] != n_i[i]:
            raise ConditionViolated(f"n_ii != n_i at i={i}")
        for j in range(m):
            if N[i][j] != N[j][i]:
                raise ConditionViolated(f"n_ij not symmetric at ({i},{j})")
            if N[i][j] < max(n_i[i], n_i[j]):
                raise ConditionViolated(f"n_ij < max(n_i, n_j) at ({i},{j})")
    for i in range(m):
        for j in range(m):
            for k in range(m):
                if N[j][k] > max(N[i][j], N[i][k]):
                    raise ConditionViolated(
                        f"n_jk > max(n_ij, n_ik) at (i,j,k)=({i},{j},{k})")

    lo = min(n_i)
    top = max(max(row) for row in N)
    chi = []
    edges = []
    prev = {}
    for n in range(lo, top + 1):
        active = [i for i in range(m) if n_i[i] <= n]
        parent = {i: i for i in active}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for ii in active:
            for jj in active:
                if ii < jj and N[ii][jj] <= n:
                    parent[find(ii)] = find(jj)
        classes = {}
        for i in active:
            classes.setdefault(find(i), set()).add(i)
        cur = {}
        for members in classes.values():
            vid = len(chi)
            chi.append(n)
            cur[frozenset(members)] = vid
            for pm, pid in prev.items():
                if pm <= members:
                    edges.append((pid, vid))
        prev = cur
    return make_root(chi, edges, top, truncated=False)


# ---------------------------------------------------------------------------
# Z[U]-modules


@dataclass(frozen=True)
class ZUModule:
    """T+[r] plus finitely many T[a](n); degrees rational, deg U = -2."""

    tower_degree: Fraction
    finite: tuple = field(default_factory=tuple)  # ((degree, length), ...)

    def __post_init__(self):
        object.__setattr__(self, "tower_degree", Fraction(self.tower_degree))
        object.__setattr__(
            self, "finite",
            tuple(sorted((Fraction(a), int(n)) for a, n in self.finite)))

    def rank_reduced(self):
        return sum(n for _, n in self.finite)

    def shifted(self, r):
        r = Fraction(r)
        return ZUModule(self.tower_degree + r,
                        tuple((a + r, n) for a, n in self.finite))

    def pretty(self):
        parts = [f"T+[{_fmt_q(self.tower_degree)}]"]
        parts += [f"T[{_fmt_q(a)}]({n})" for a, n in self.finite]
        return " (+) ".join(parts)

    def to_json(self):
        return {"tower": _fmt_q(self.tower_degree),
                "finite": [[_fmt_q(a), n] for a, n in self.finite]}


def module_of_root(root):
    """H(R, chi) via the greedy minima ordering.

    v_1 is a global minimum; each later v_k is a remaining minimum of least
    chi, and w_k is the lowest vertex dominating both v_k and some earlier
    v.  The decomposition type does not depend on tie-breaks; ties are
    resolved by vertex id (creation order).
    """
    if root.truncated:
        raise ValueError("module of a truncated root is not determined")
    parents = root.parents
    minima = sorted(root.local_minima(), key=lambda v: (root.chi[v], v))
    v1 = minima[0]
    covered = set()
    w = v1
    while w is not None:
        covered.add(w)
        w = parents[w]
    finite = []
    for v in minima[1:]:
        w = v
        path = []
        while w not in covered:
            path.append(w)
            w = parents[w]
        covered.update(path)
        finite.append((Fraction(2 * root.chi[v]), root.chi[w] - root.chi[v]))
    return ZUModule(Fraction(2 * root.chi[v1]), tuple(finite))


def rank_red_from_tau(tau, return_module=False):
    """Finite rank of H_red(R_tau) together with min tau.

    Under the hypothesis tau(1) > tau(0) this is the closed form
    -tau(0) + min tau + sum_i max(tau(i) - tau(i+1), 0); otherwise the rank
    is read from the module of the constructed root.
    """
    if not isinstance(tau, TauFunction):
        tau = TauFunction(tuple(tau), certified=True)
    vals = tau.values
    m = min(vals)
    if len(vals) >= 2 and vals[1] > vals[0]:
        drops = sum(max(vals[i] - vals[i + 1], 0) for i in range(len(vals) - 1))
        rank = -vals[0] + m + drops
    else:
        rank = module_of_root(root_from_tau(tau)).rank_reduced()
    return (rank, m)


def shift_root(root, r):
    """(R, chi)[r]: same tree with grading chi + r (r an integer)."""
    r = int(r)
    return GradedRoot(chi=tuple(c + r for c in root.chi), edges=root.edges,
                      top_level=root.top_level + r, truncated=root.truncated)


def shift_module(module, r):
    """P[r]: all degrees shifted by the rational r."""
    return module.shifted(r)


# ---------------------------------------------------------------------------
# DOT export


def dot_export(root, degree_shift=0):
    """Graphviz text for a graded root.

    Vertices are ranked by chi; each label shows chi and the absolute
    degree -2*chi + degree_shift.  Vertex names follow the (chi, id) order,
    so the output is deterministic for a given root.
    """
    shift = Fraction(degree_shift)
    order = sorted(range(len(root.chi)), key=lambda v: (root.chi[v], v))
    name = {v: f"v{i}" for i, v in enumerate(order)}
    lines = ["digraph gradedroot {", "  rankdir=BT;", "  node [shape=circle];"]
    for v in order:
        deg = -2 * root.chi[v] + shift
        lines.append(f'  {name[v]} [label="chi={root.chi[v]}\\ndeg={_fmt_q(deg)}"];')
    levels = {}
    for v in order:
        levels.setdefault(root.chi[v], []).append(name[v])
    for n in sorted(levels):
        lines.append("  { rank=same; " + "; ".join(levels[n]) + "; }")
    for u, v in sorted(root.edges, key=lambda e: (min(e), max(e))):
        lo, hi = (u, v) if root.chi[u] < root.chi[v] else (v, u)
        lines.append(f"  {name[lo]} -> {name[hi]};")
    if not root.truncated:
        top = next(v for v in order if root.chi[v] == root.top_level)
        lines.append('  ray [label="...", shape=none];')
        lines.append(f"  {name[top]} -> ray [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
