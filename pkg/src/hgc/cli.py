"""Command-line interface: ``hgc <command> ...``.

Exit status: 0 when every requested verification passes, 1 when one fails
(a counterexample dump goes to stderr), 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import __version__, checks
from .basis import Sector, Window, WindowTooLarge, enumerate_cached
from .complexes import DifferentialKind, d_squared_failures, delta_join, delta_split, differential
from .formal import FormalSum
from .graphcore import Flavor, GraphError, Parameters, graph_from_obj, graph_to_obj, kernel_name
from .homology import ConeComplex, InternalConsistencyError, SectorComplex
from .linfty import MCElement, NotMaurerCartan, linfty_relation_check, mc_curvature, twist_differential
from .phimap import is_primed, phi, verify_phi

log = logging.getLogger("hgc")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- parsing helpers ------------------------------------------------------------------------

def _params(args) -> Parameters:
    if getattr(args, "m", None) is None or getattr(args, "n", None) is None:
        raise UsageError("--m and --n are required here")
    try:
        return Parameters(args.m, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _degree_range(text):
    if text is None:
        return None
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(text)]
    except ValueError as exc:
        raise UsageError(f"bad degree range {text!r} (use d or a..b)") from exc


def _grid(text):
    if text in (None, "small"):
        return list(checks.SMALL_GRID)
    out = []
    try:
        for part in text.split(";"):
            m, n = part.split(",")
            out.append((int(m), int(n)))
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r} (use 'small' or 'm,n;m,n')") from exc
    for m, n in out:
        if n - m < 3:
            raise UsageError(f"grid point ({m},{n}) violates n - m >= 3")
    return out


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _read_sum(path, args=None, flavor=None) -> FormalSum:
    """A FormalSum file, or a single graph file read as coefficient 1."""
    obj = _read_json(path)
    try:
        if "terms" in obj:
            p = Parameters(int(obj["m"]), int(obj["n"])) if "m" in obj else _params(args)
            fl = Flavor(obj["flavor"]) if "flavor" in obj else Flavor(flavor or args.flavor)
            return FormalSum.from_obj(obj, p, fl)
        g, p, fl = graph_from_obj(obj)
        p = p or _params(args)
        fl = fl or Flavor(flavor or args.flavor)
        g.validate(fl)
        return FormalSum.inject(g, p, fl)
    except UsageError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid input in {path}: {exc}") from exc


def _emit(args, obj):
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, default=str)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _parse_window_spec(text):
    """``V=5,H=5[,E=8]`` -> (V, H, E or None)."""
    vals = {}
    try:
        for part in text.split(","):
            k, v = part.split("=")
            vals[k.strip().upper()] = int(v)
        return vals["V"], vals["H"], vals.get("E")
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad window {text!r} (use V=5,H=5 or V=5,H=5,E=8)") from exc


def _resolve_window_flags(args):
    if getattr(args, "window", None):
        v, h, e = _parse_window_spec(args.window)
        args.max_v = v if args.max_v is None else args.max_v
        args.max_h = h if args.max_h is None else args.max_h
        args.max_e = e if args.max_e is None else args.max_e


def _window(args, flavor=None, sector=None) -> Window:
    _resolve_window_flags(args)
    if args.max_v is None or args.max_h is None:
        raise UsageError("a window is required: --max-v and --max-h, or --window V=..,H=..")
    try:
        return Window(args.max_v, args.max_h, Flavor(flavor or args.flavor), _params(args),
                      Sector(sector or getattr(args, "sector", "All")), getattr(args, "max_e", None))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- commands -------------------------------------------------------------------------------

def cmd_enumerate(args):
    w = _window(args)
    slices = enumerate_cached(w, degrees=_degree_range(args.degree))
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf)
        wr.writerow(["degree", "count", "complete", "graphs"])
        for d, s in slices.items():
            wr.writerow([d, len(s), str(s.complete).lower(),
                         " ".join(json.dumps(graph_to_obj(g), separators=(",", ":")) for g in s.graphs)])
        _emit(args, buf.getvalue().rstrip("\n"))
    else:
        _emit(args, {"window": w.describe(), "slices": [
            {"degree": d, "count": len(s), "complete": s.complete, "graphs": [graph_to_obj(g) for g in s.graphs]}
            for d, s in slices.items()]})
    return EXIT_OK


def cmd_diff(args):
    x = _read_sum(args.input, args)
    try:
        if args.kind == "split":
            y = delta_split(x)
        elif args.kind == "join":
            y = delta_join(x)
        else:
            y = differential(x, DifferentialKind(args.kind) if args.kind else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, y.to_obj())
    return EXIT_OK


def cmd_d2check(args):
    w = _window(args)
    kind = DifferentialKind.for_flavor(w.flavor)
    graphs = [g for s in enumerate_cached(w).values() for g in s.graphs]
    bad = d_squared_failures(graphs, w.params, kind)
    _emit(args, {"window": w.describe(), "graphs": len(graphs), "failures": [str(g) for g in bad]})
    if bad:
        print(f"d^2 != 0 on {bad[0]}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _betti_rows(reports, fmt):
    rows = [r.to_obj() for r in reports]
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.DictWriter(buf, fieldnames=["degree", "kernel_dim", "image_dim", "betti", "certified"])
        wr.writeheader()
        wr.writerows(rows)
        return buf.getvalue().rstrip("\n")
    return rows


def cmd_homology(args):
    p = _params(args)
    flavor, sector = Flavor(args.flavor), Sector(args.sector)
    window = None
    _resolve_window_flags(args)
    if args.max_v is not None or args.max_h is not None:
        window = _window(args)
    degrees = _degree_range(args.degree) or list(range(3 - p.n, p.n - p.m + 1))
    sc = SectorComplex(p, flavor, sector, window=window)
    reports = [sc.betti(d) for d in degrees]
    out = _betti_rows(reports, args.format)
    if args.format == "json":
        out = {"m": p.m, "n": p.n, "flavor": flavor.value, "sector": sector.value,
               "window": window.describe() if window else "certified", "reports": out,
               "uncertified_degrees": [r.degree for r in reports if not r.certified]}
    _emit(args, out)
    return EXIT_OK


def cmd_cone(args):
    p = _params(args)
    degrees = _degree_range(args.degree) or list(range(3 - p.n, 2 * (p.n - p.m)))
    cone = ConeComplex(p)
    reports = [cone.betti(k) for k in degrees]
    out = _betti_rows(reports, args.format)
    if args.format == "json":
        out = {"m": p.m, "n": p.n, "reports": out,
               "uncertified_degrees": [r.degree for r in reports if not r.certified]}
    _emit(args, out)
    return EXIT_OK


def cmd_phi(args):
    if args.action == "apply":
        x = _read_sum(args.input, args, flavor=Flavor.APRIME.value)
        if x.flavor is not Flavor.APRIME:
            raise UsageError("phi apply expects an Aprime graph or sum")
        if not all(is_primed(g) for g in x.terms):
            raise UsageError("phi apply needs graphs with an omega-hair and an internal vertex")
        _emit(args, phi(x).to_obj())
        return EXIT_OK
    p = _params(args)
    w = _window(args, flavor=Flavor.APRIME.value, sector=Sector.PRIMED.value)
    graphs = [g for s in enumerate_cached(w).values() for g in s.graphs]
    rep = verify_phi(graphs, p)
    _emit(args, {"window": w.describe(), **rep.summary(),
                 "counterexamples": [str(g) for g in (rep.chain_map + rep.factorization + rep.round_trip
                                                      + rep.triangular + rep.pieces)[:5]]})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_linf(args):
    p = _params(args)
    w = _window(args, flavor=Flavor.A.value, sector=Sector.ALL.value)
    graphs = [g for s in enumerate_cached(w).values() for g in s.graphs]
    sample = args.samples
    if sample is None and args.arity == 3:
        sample = 20
    rep = linfty_relation_check(args.arity, graphs, p, sample=sample, seed=args.seed)
    _emit(args, {"window": w.describe(), "arity": rep.arity, "checked": rep.checked,
                 "passed": rep.passed, "failures": [[str(g) for g in t] for t in rep.failures]})
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_mc(args):
    if args.input:
        pi = _read_sum(args.input, args, flavor=Flavor.A.value)
    else:
        if not args.name:
            raise UsageError("give --name or --in")
        pi = checks._named(args.name, _params(args))
    try:
        curv = mc_curvature(pi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = curv.is_zero()
    _emit(args, {"m": pi.params.m, "n": pi.params.n, "maurer_cartan": ok, "curvature": curv.to_obj()})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_twist(args):
    pi = _read_sum(args.pi, args, flavor=Flavor.A.value)
    x = _read_sum(args.input, args, flavor=Flavor.A.value)
    if pi.params != x.params:
        raise UsageError("pi and input have different parameters")
    try:
        y = twist_differential(MCElement(pi), x)
    except NotMaurerCartan as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, y.to_obj())
    return EXIT_OK


def cmd_parity_table(args):
    ok, details = checks.parity_table(_grid(args.grid))
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.DictWriter(buf, fieldnames=["m", "n", "graph", "nonzero", "expected", "match"])
        wr.writeheader()
        wr.writerows(details["rows"])
        _emit(args, buf.getvalue().rstrip("\n"))
    else:
        _emit(args, details)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(args):
    if args.grid not in (None, "small"):
        raise UsageError("verify-all runs the preset grid 'small'")
    only = [int(x) for x in args.only.split(",")] if args.only else None
    if only and any(k not in checks.CRITERIA_BY_NUMBER for k in only):
        raise UsageError(f"criteria are numbered {min(checks.CRITERIA_BY_NUMBER)}..{max(checks.CRITERIA_BY_NUMBER)}")
    progress = lambda r: print(r.line(), file=sys.stderr, flush=True)  # noqa: E731
    if args.jobs > 1:
        results = checks.run_parallel(only, args.jobs, progress=progress)
    else:
        results = checks.run_all(only, progress=progress)
    _emit(args, {"kernel": kernel_name(), "results": [
        {"criterion": r.number, "name": r.name, "passed": r.passed, "seconds": round(r.seconds, 2),
         "details": r.details} for r in results]})
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser ----------------------------------------------------------------------------------

def _window_args(p):
    p.add_argument("--max-v", type=int)
    p.add_argument("--max-h", type=int)
    p.add_argument("--max-e", type=int)
    p.add_argument("--window", help="shorthand V=5,H=5[,E=8]")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hgc", description="Exact computations in hairy graph complexes.")
    ap.add_argument("--version", action="version", version=f"hgc {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--config", help="JSON file of option defaults; command-line flags win")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, window=True, flavor=True, sector=False, fmt=False):
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        if flavor:
            p.add_argument("--flavor", choices=[f.value for f in Flavor], default="A")
        if sector:
            p.add_argument("--sector", choices=[s.value for s in Sector], default="All")
        if window:
            _window_args(p)
        if fmt:
            p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", "-o")

    p = sub.add_parser("enumerate", help="list basis graphs of a window")
    common(p, sector=True, fmt=True)
    p.add_argument("--degree")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("diff", help="differential of a graph or sum")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--kind", choices=["split", "join", "full", "prime"],
                   help="one half of the differential, or the whole one (default: the flavor's)")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--flavor", choices=[f.value for f in Flavor], default="A")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("d2check", help="check d^2 = 0 on a window")
    common(p)
    p.set_defaults(func=cmd_d2check)

    p = sub.add_parser("homology", help="Betti numbers of a sector")
    common(p, window=False, sector=True, fmt=True)
    _window_args(p)
    p.add_argument("--degree")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("cone", help="homology of the mapping cone")
    common(p, window=False, flavor=False, fmt=True)
    p.add_argument("--degree")
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("phi", help="the comparison map")
    psub = p.add_subparsers(dest="action", required=True)
    q = psub.add_parser("verify")
    common(q, flavor=False)
    q.set_defaults(func=cmd_phi)
    q = psub.add_parser("apply")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--m", type=int)
    q.add_argument("--n", type=int)
    q.add_argument("--output", "-o")
    q.set_defaults(func=cmd_phi)

    p = sub.add_parser("linf", help="L-infinity relations")
    psub = p.add_subparsers(dest="action", required=True)
    q = psub.add_parser("verify")
    common(q, flavor=False)
    q.add_argument("--arity", type=int, choices=[2, 3], required=True)
    q.add_argument("--samples", type=int, default=None,
                   help="random tuples to test (default: all pairs for arity 2, 20 triples for arity 3)")
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_linf)

    p = sub.add_parser("mc", help="Maurer-Cartan equation")
    psub = p.add_subparsers(dest="action", required=True)
    q = psub.add_parser("check")
    q.add_argument("--name", choices=["Lomega", "Tomega"])
    q.add_argument("--in", dest="input")
    q.add_argument("--m", type=int)
    q.add_argument("--n", type=int)
    q.add_argument("--output", "-o")
    q.set_defaults(func=cmd_mc)

    p = sub.add_parser("twist", help="twisted differential")
    p.add_argument("--pi", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("parity-table", help="vanishing of the named diagrams")
    p.add_argument("--grid", default="small")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_parity_table)

    p = sub.add_parser("verify-all", help="run the whole verification suite")
    p.add_argument("--grid", default="small")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (content is unaffected)")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify_all)
    return ap


def _apply_config(ap: argparse.ArgumentParser, cfg: dict):
    """Use ``cfg`` as defaults for every (sub)command that has a matching option."""
    stack = [ap]
    while stack:
        p = stack.pop()
        for action in p._actions:
            if isinstance(action, argparse._SubParsersAction):
                stack.extend(action.choices.values())
            elif action.dest in cfg:
                action.default = cfg[action.dest]
                action.required = False


def _load_config(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    cfg = _read_json(known.config)
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        cfg = _load_config(argv)
    except UsageError as exc:
        print(f"hgc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _apply_config(ap, cfg)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, GraphError, WindowTooLarge) as exc:
        print(f"hgc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalConsistencyError as exc:
        print(f"hgc: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
