"""Batch front end: analyze plumbing graphs, export roots, verify identities.

Subcommands
-----------
analyze  GRAPH.json            classification + per-orbit invariant table
root     GRAPH.json -o PREFIX  DOT file per selected orbit (PREFIX_orbit<i>.dot)
lens     P Q [--spinc A|--table]   closed-form lens invariants
seifert  --e0 E0 --leg a/w ...     closed-form Seifert reports
oracle   GRAPH.json [--level N]    brute-force sublevel/root data
verify   lens PMAX | seifert ... | --oracle GRAPH.json   identity suites

Exit codes: 0 success, 1 input error, 2 graph did not certify
almost-rational (analyze/root only; rerun with `oracle`).  Rationals are
printed as "p/q" strings; the only floating-point outputs are the numeric
oracle columns explicitly labelled approx.  Files are written to a
temporary path and renamed, so failures leave no partial output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from . import engine, lens as lens_mod, oracle, seifert as seifert_mod, spinc
from .plumbing import canonical_class, casson_walker, graph_from_json, k_squared_plus_s
from .roots import _fmt_q, dot_export


@dataclass
class RunConfig:
    """Resolved invocation: exactly one input source, plus output options."""

    graph: object = None
    lens: object = None
    seifert: object = None
    orbits: object = None          # None = all, else list of indices
    out_format: str = "table"
    dot_prefix: str = None
    oracle_enabled: bool = False
    level_cap: int = oracle.DEFAULT_POINT_CAP
    ar_decrement_cap: int = engine.DEFAULT_AR_DECREMENT_CAP


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-gradedroots-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _load_graph(path):
    with open(path) as f:
        return graph_from_json(json.load(f))


def _parse_orbits(text):
    if text in (None, "all"):
        return None
    return [int(v) for v in text.split(",") if v != ""]


def _select(reports, wanted):
    if wanted is None:
        return reports
    return [r for r in reports if r.orbit.orbit_index in wanted]


def _table(rows, header):
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(str(v).ljust(w) for v, w in zip(r, widths))
             for r in [header] + rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# analyze / root


def cmd_analyze(config):
    cls = engine.classify(config.graph, max_decrements=config.ar_decrement_cap)
    if not cls.is_ar():
        print(f"classification: {cls.describe()}")
        print("graph did not certify almost-rational; "
              "the `oracle` subcommand still enumerates sublevel roots")
        return 2
    cls, reports = engine.analyze_all(config.graph, cls)
    reports = _select(reports, config.orbits)
    if config.out_format == "json":
        orbits = []
        for r in reports:
            entry = r.to_json()
            # orbits are rendered both as b-coordinates and pairing vectors
            entry["l_prime_pairings"] = list(r.orbit.pairings)
            entry["module"] = r.module.to_json()
            orbits.append(entry)
        payload = {"classification": cls.describe(),
                   "k2_plus_s": _fmt_q(k_squared_plus_s(config.graph)),
                   "casson_walker": _fmt_q(casson_walker(config.graph)),
                   "orbits": orbits}
        print(json.dumps(payload, indent=2))
        return 0
    rows = [[r.orbit.orbit_index, _fmt_q(r.d), r.rank_red, r.chi_hf,
             _fmt_q(r.sw_osz), r.certified] for r in reports]
    header = ["orbit", "d", "rank_red", "chi_hf", "sw_osz", "certified"]
    if config.out_format == "csv":
        out = [",".join(str(v) for v in header)]
        out += [",".join(str(v) for v in row) for row in rows]
        print("\n".join(out))
        return 0
    print(f"classification: {cls.describe()}")
    print(f"K^2+s = {_fmt_q(k_squared_plus_s(config.graph))}, "
          f"lambda = {_fmt_q(casson_walker(config.graph))}, "
          f"|H| = {config.graph.form.order}")
    print(_table(rows, header), end="")
    return 0


def cmd_root(config):
    cls = engine.classify(config.graph, max_decrements=config.ar_decrement_cap)
    if not cls.is_ar():
        if not config.oracle_enabled:
            print(f"classification: {cls.describe()}; rerun with --oracle "
                  "to export brute-force truncated roots")
            return 2
        K = canonical_class(config.graph)
        root = oracle.root_oracle(config.graph, K, 1, point_cap=config.level_cap)
        path = f"{config.dot_prefix}_canonical.dot"
        _write_atomic(path, dot_export(root, k_squared_plus_s(config.graph) / 4))
        print(f"wrote {path}")
        return 0
    cls, reports = engine.analyze_all(config.graph, cls)
    for r in _select(reports, config.orbits):
        path = f"{config.dot_prefix}_orbit{r.orbit.orbit_index}.dot"
        _write_atomic(path, dot_export(r.root, r.kr2s / 4))
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# lens / seifert reports


def cmd_lens(p, q, a=None, table=False, out_format="table", numeric=True):
    L = lens_mod.LensSpace(p, q)
    which = range(p) if (table or a is None) else [a]
    approx = lens_mod.torsion_fourier_all(L) if numeric else None
    rows = []
    for ai in which:
        inv = lens_mod.lens_invariants(L, ai, check_numeric=False)
        row = {"p": p, "q": q, "a": ai, "d": _fmt_q(inv.d), "rank_red": 0,
               "torsion": _fmt_q(inv.torsion), "lambda": _fmt_q(inv.lam)}
        if numeric:
            row["torsion_approx"] = repr(float(approx[ai]))
        rows.append(row)
    header = list(rows[0].keys())
    if out_format == "json":
        print(json.dumps(rows, indent=2))
    elif out_format == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(str(row[h]) for h in header))
    else:
        print(_table([[row[h] for h in header] for row in rows], header), end="")
    return 0


def _seifert_reports(data):
    k2s = seifert_mod.seifert_k2s(data)
    rows = []
    for idx, sp in enumerate(seifert_mod.enumerate_seifert_spinc(data)):
        chi_l = seifert_mod.seifert_chi_lprime(data, sp)
        kr2s = k2s - 8 * chi_l
        tf = seifert_mod.seifert_tau(data, sp)
        vals = tf.values
        min_tau = min(vals)
        rank = min_tau + sum(max(0, vals[i] - vals[i + 1]) for i in range(len(vals) - 1))
        d = kr2s / 4 - 2 * min_tau
        Lim = seifert_mod.seifert_torsion_limit(data, sp)
        torsion = Lim + rank - min_tau
        rows.append({"orbit": idx, "a0": sp.a0,
                     "a": ";".join(str(v) for v in sp.a),
                     "d": _fmt_q(d), "rank_red": rank, "chi_hf": rank,
                     "sw_osz": _fmt_q(rank - d / 2),
                     "torsion": _fmt_q(torsion), "torsion_limit": _fmt_q(Lim),
                     "certified": tf.certified})
    return rows


def cmd_seifert(data, out_format="table"):
    rows = _seifert_reports(data)
    header = list(rows[0].keys())
    if out_format == "json":
        payload = {"data": data.describe(),
                   "k2_plus_s": _fmt_q(seifert_mod.seifert_k2s(data)),
                   "casson_walker": _fmt_q(casson_walker(data.graph)),
                   "h_order": data.h_order,
                   "dp_invariant": seifert_mod.dp_invariant(data),
                   "orbits": rows}
        print(json.dumps(payload, indent=2))
    elif out_format == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(str(row[h]) for h in header))
    else:
        print(f"{data.describe()}  e = {_fmt_q(data.e)}  |H| = {data.h_order}  "
              f"DP = {seifert_mod.dp_invariant(data)}")
        print(_table([[row[h] for h in header] for row in rows], header), end="")
    return 0


# ---------------------------------------------------------------------------
# oracle command


def cmd_oracle(config, level=None, orbit_index=None, dot_path=None):
    g = config.graph
    orbits = spinc.enumerate_spinc(g)
    chosen = orbits if orbit_index is None else [orbits[orbit_index]]
    for orb in chosen:
        min_c = oracle.min_chi(g, orb.k_r, point_cap=config.level_cap)
        n_max = level if level is not None else min_c + 6
        root = oracle.root_oracle(g, orb.k_r, n_max, point_cap=config.level_cap)
        lev = oracle.enumerate_sublevel(g, orb.k_r, n_max, point_cap=config.level_cap)
        print(f"orbit {orb.orbit_index}: min chi = {min_c}, "
              f"|sublevel({n_max})| = {lev.n_points}, "
              f"components = {lev.n_components}, root = {root!r}")
        if dot_path:
            path = f"{dot_path}_orbit{orb.orbit_index}.dot"
            kr2s = g.pairing(orb.k_r.vector, orb.k_r.vector) + g.s
            _write_atomic(path, dot_export(root, Fraction(kr2s, 4)))
            print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# verify suites


def verify_oracle_graph(graph, level_offset=6, point_cap=oracle.DEFAULT_POINT_CAP):
    """Engine-vs-oracle equivalence on every orbit of an AR graph: the
    engine root truncated at min tau + ``level_offset`` must equal the
    enumerated sublevel root.  Returns a report dict; raises AssertionError
    with the offending orbit otherwise."""
    cls = engine.classify(graph)
    if not cls.is_ar():
        raise engine.NotAR(cls.describe())
    checked = []
    for orb in spinc.enumerate_spinc(graph):
        rep = engine.analyze_orbit(graph, orb, cls)
        cut = rep.min_tau + level_offset
        eng_root = rep.root.truncate(cut)
        orc_root = oracle.root_oracle(graph, orb.k_r, cut, point_cap=point_cap)
        assert eng_root == orc_root.truncate(cut), \
            f"orbit {orb.orbit_index}: engine root != oracle root at level {cut}"
        checked.append(orb.orbit_index)
    zero = oracle.component_zero_structure(graph, point_cap=point_cap)
    assert zero["ok"], f"zero-component structure violated: {zero}"
    return {"classification": cls.describe(), "orbits_checked": checked,
            "zero_component": zero, "ok": True}


def cmd_verify(args, config):
    if args.lens_pmax is not None:
        stats = lens_mod.verify_lens_sweep(args.lens_pmax)
        print(f"lens sweep ok: {stats['pairs']} spaces, {stats['orbits']} orbits, "
              "all identities exact, Fourier torsion within 1e-9")
        return 0
    if args.seifert_data is not None:
        rep = seifert_mod.verify_sw_identity(args.seifert_data)
        print(f"{rep['data']}: sw identity exact on {len(rep['orbits'])} orbits; "
              f"lambda = {_fmt_q(rep['lambda'])}, K^2+s = {_fmt_q(rep['k2s'])}")
        return 0
    rep = verify_oracle_graph(config.graph, point_cap=config.level_cap)
    print(f"oracle equivalence ok: {rep['classification']}, "
          f"orbits {rep['orbits_checked']}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _leg(text):
    a, _, w = text.partition("/")
    return (int(a), int(w))


def build_parser():
    ap = argparse.ArgumentParser(prog="gradedroots", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, graph=True):
        if graph:
            p.add_argument("graph", help="path to a graph JSON file")
        p.add_argument("--format", choices=["table", "json", "csv"], default="table")
        p.add_argument("--orbits", default="all",
                       help="comma-separated orbit indices, or 'all'")
        p.add_argument("--point-cap", type=int, default=oracle.DEFAULT_POINT_CAP)
        p.add_argument("--ar-cap", type=int, default=engine.DEFAULT_AR_DECREMENT_CAP,
                       help="max decrements in the almost-rational vertex search")

    p = sub.add_parser("analyze", help="classification and per-orbit invariants")
    add_common(p)

    p = sub.add_parser("root", help="export graded roots as DOT")
    add_common(p)
    p.add_argument("-o", "--out", required=True, help="output path prefix")
    p.add_argument("--oracle", action="store_true",
                   help="fall back to brute-force roots when not AR")

    p = sub.add_parser("lens", help="closed-form lens space invariants")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--spinc", type=int, default=None, help="single orbit a")
    p.add_argument("--table", action="store_true", help="all orbits")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.add_argument("--no-numeric", action="store_true",
                   help="skip the approx Fourier torsion column")

    p = sub.add_parser("seifert", help="closed-form Seifert reports")
    p.add_argument("--e0", type=int, required=True)
    p.add_argument("--leg", type=_leg, action="append", required=True,
                   metavar="a/w", help="one leg as alpha/omega (repeat >= 3 times)")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")

    p = sub.add_parser("oracle", help="brute-force sublevel enumeration")
    add_common(p)
    p.add_argument("--level", type=int, default=None,
                   help="sublevel cutoff (default: min chi + 6)")
    p.add_argument("--orbit", type=int, default=None, help="single orbit index")
    p.add_argument("--dot", default=None, help="write DOT files with this prefix")

    p = sub.add_parser("verify", help="identity and oracle-equivalence suites")
    p.add_argument("what", nargs="?", choices=["lens", "seifert"], default=None)
    p.add_argument("pmax", nargs="?", type=int, default=None,
                   help="lens sweep bound (with 'verify lens')")
    p.add_argument("--e0", type=int, default=None)
    p.add_argument("--leg", type=_leg, action="append", default=None, metavar="a/w")
    p.add_argument("--oracle", dest="oracle_graph", default=None, metavar="GRAPH",
                   help="graph JSON for the engine-vs-oracle suite")
    p.add_argument("--point-cap", type=int, default=oracle.DEFAULT_POINT_CAP)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "analyze":
            config = RunConfig(graph=_load_graph(args.graph),
                               orbits=_parse_orbits(args.orbits),
                               out_format=args.format,
                               level_cap=args.point_cap,
                               ar_decrement_cap=args.ar_cap)
            return cmd_analyze(config)
        if args.command == "root":
            config = RunConfig(graph=_load_graph(args.graph),
                               orbits=_parse_orbits(args.orbits),
                               dot_prefix=args.out,
                               oracle_enabled=args.oracle,
                               level_cap=args.point_cap,
                               ar_decrement_cap=args.ar_cap)
            return cmd_root(config)
        if args.command == "lens":
            return cmd_lens(args.p, args.q, a=args.spinc, table=args.table,
                            out_format=args.format, numeric=not args.no_numeric)
        if args.command == "seifert":
            data = seifert_mod.SeifertData(e0=args.e0, legs=tuple(args.leg))
            return cmd_seifert(data, out_format=args.format)
        if args.command == "oracle":
            config = RunConfig(graph=_load_graph(args.graph),
                               orbits=_parse_orbits(args.orbits),
                               level_cap=args.point_cap)
            return cmd_oracle(config, level=args.level, orbit_index=args.orbit,
                              dot_path=args.dot)
        if args.command == "verify":
            args.lens_pmax = args.pmax if args.what == "lens" else None
            args.seifert_data = None
            if args.what == "seifert":
                if not args.leg or args.e0 is None:
                    raise ValueError("verify seifert needs --e0 and >= 3 --leg")
                args.seifert_data = seifert_mod.SeifertData(e0=args.e0,
                                                            legs=tuple(args.leg))
            config = RunConfig(level_cap=args.point_cap)
            if args.what is None:
                if args.oracle_graph is None:
                    raise ValueError("verify needs 'lens PMAX', 'seifert ...' "
                                     "or '--oracle GRAPH'")
                config.graph = _load_graph(args.oracle_graph)
            return cmd_verify(args, config)
        raise ValueError(f"unknown command {args.command}")
    except engine.NotAR as exc:
        print(f"not almost-rational: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, AssertionError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
