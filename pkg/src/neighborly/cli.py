"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 resource guard abort.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .chirotope import Chirotope, chirotope_from_points, dual, is_gp_consistent, parse_points
from .errors import DegeneracyError, ResourceLimit, UsageError

EXIT_OK, EXIT_USAGE, EXIT_GUARD = 0, 2, 3


def _conventions(values):
    conv = {"diagonal": "count", "missing": "minimal"}
    for v in values or []:
        for tok in v.split(","):
            tok = tok.strip()
            if not tok:
                continue
            if "=" in tok:
                name, val = tok.split("=", 1)
            elif tok in ("count", "zero"):
                name, val = "diagonal", tok
            elif tok in ("minimal", "all"):
                name, val = "missing", tok
            else:
                raise UsageError(f"unknown convention {tok!r}")
            if name not in conv:
                raise UsageError(f"unknown convention name {name!r}")
            conv[name] = val
    return conv


def _emit(obj, out):
    text = json.dumps(obj, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _entry(cat, index):
    if not 1 <= index <= len(cat.entries):
        raise UsageError(f"entry {index} outside 1..{len(cat.entries)}")
    return cat.entries[index - 1]


def cmd_enumerate(a):
    from .pipeline import enumerate_levels, stats
    def progress(cat):
        s = stats(cat)
        print(f"n={cat.n}: classes={s['classes']} face_lattices={s['face_lattices']} "
              f"signatures={s['signatures']} compatible={s['compatible']}", flush=True)
    enumerate_levels(a.rank, a.k, a.n, a.out, jobs=a.jobs, checkpoint_dir=a.checkpoint_dir,
                     limit_seconds=a.limit_seconds, limit_entries=a.limit_entries,
                     face_rule=a.face_rule, progress=progress)


def cmd_analyze(a):
    from .pipeline import analyze_catalog, read_catalog
    conv = _conventions(a.convention)
    sel = [s for s in a.analyses.split(",") if s] if a.analyses else None
    rep = analyze_catalog(read_catalog(a.catalog), sel, jobs=a.jobs, **conv)
    _emit(rep, a.out)


def cmd_bfp(a):
    from .bfp import biquadratic_inequalities, bfp_nonrealizable, certificate_json
    from .pipeline import read_catalog
    cat = read_catalog(a.catalog)
    idxs = [a.entry] if a.entry else range(1, len(cat.entries) + 1)
    results = []
    for i in idxs:
        chi = _entry(cat, i)
        bad, cert = bfp_nonrealizable(chi)
        rec = {"entry": i, "nonrealizable": bad}
        if bad:
            cj = certificate_json(biquadratic_inequalities(chi), cert)
            if a.cert_dir:
                p = Path(a.cert_dir)
                p.mkdir(parents=True, exist_ok=True)
                path = p / f"entry_{i:06d}.json"
                path.write_text(json.dumps({"entry": i, "chirotope": chi.to_line(), "certificate": cj}, indent=1) + "\n")
                rec["certificate_file"] = str(path)
            else:
                rec["certificate"] = cj
        results.append(rec)
    _emit({"catalog": str(a.catalog), "nonrealizable": sum(r["nonrealizable"] for r in results),
           "results": results}, a.out)


def cmd_verify(a):
    from .pipeline import read_catalog, verify_entries, verify_levels
    if a.certificate:
        from .bfp import biquadratic_inequalities, certificate_from_json, verify_certificate
        data = json.loads(Path(a.certificate).read_text())
        if a.catalog:
            chi = _entry(read_catalog(a.catalog), a.entry or data.get("entry", 1))
        elif "chirotope" in data:
            chi = Chirotope.from_line(data["chirotope"])
        else:
            raise UsageError("need a catalog or a certificate carrying its chirotope")
        sys_ = biquadratic_inequalities(chi)
        ok = verify_certificate(sys_, certificate_from_json(sys_, data["certificate"]))
        print("certificate valid" if ok else "certificate INVALID")
        return EXIT_OK if ok else 1
    if not a.catalog:
        raise UsageError("verify needs a catalog")
    cat = read_catalog(a.catalog)
    bad = verify_entries(cat)
    if a.lower:
        missing = verify_levels(read_catalog(a.lower), cat)
        print(f"level consistency: {len(missing)} deletions missing from the lower catalog")
        bad_levels = bool(missing)
    else:
        bad_levels = False
    print(f"entries checked: {len(cat.entries)}, failing: {len(bad)}")
    return EXIT_OK if not bad and not bad_levels else 1


def cmd_stats(a):
    from .pipeline import read_catalog, stats
    out = [stats(read_catalog(p)) for p in a.catalogs]
    for s in out:
        for w in s["warnings"]:
            logging.warning("%s", w)
    _emit(out if len(out) > 1 else out[0], a.out)


def cmd_dedupe(a):
    from .canon import dedupe
    from .pipeline import Catalog, read_catalog, write_catalog, format_catalog
    from .canon import KEY_FUNCTIONS
    cats = [read_catalog(p) for p in a.catalogs]
    items = [c for cat in cats for c in cat.entries]
    if not items:
        raise UsageError("no entries to deduplicate")
    reps = dedupe(items, a.key)
    fn = KEY_FUNCTIONS[a.key]
    cat = Catalog(items[0].r, items[0].n, cats[0].k, {"classes": len(reps), "key": a.key},
                  reps, [fn(c) for c in reps])
    if a.out:
        write_catalog(a.out, cat)
    else:
        sys.stdout.write(format_catalog(cat))


def cmd_dual(a):
    from .pipeline import Catalog, format_catalog, read_catalog, write_catalog
    from .canon import chirotope_key
    cat = read_catalog(a.catalog)
    ds = [dual(c) for c in cat.entries]
    out = Catalog(cat.n - cat.r, cat.n, None, {"dual_of": Path(a.catalog).name}, ds,
                  [chirotope_key(c) for c in ds])
    if a.out:
        write_catalog(a.out, out)
    else:
        sys.stdout.write(format_catalog(out))


def cmd_from_points(a):
    from .analyze import universal_edges
    from .faces import is_matroid_polytope, is_neighborly
    text = Path(a.points).read_text() if a.points != "-" else sys.stdin.read()
    chi = chirotope_from_points(parse_points(text))
    if a.json:
        rep = {"chirotope": chi.to_line(), "gp_consistent": is_gp_consistent(chi),
               "matroid_polytope": is_matroid_polytope(chi), "neighborly": is_neighborly(chi)}
        if chi.r % 2 and chi.r >= 3 and rep["neighborly"]:
            rep["universal_edges"] = len(universal_edges(chi))
        _emit(rep, a.out)
    else:
        print(chi.to_line())


def cmd_cnf(a):
    from .extend import facet_constraints, ExtensionContext, parse_models
    from .pipeline import read_catalog
    chi = _entry(read_catalog(a.catalog), a.entry)
    cs = facet_constraints(chi, a.k)
    if a.models:
        models = parse_models(Path(a.models).read_text(), cs.nvars)
        ctx = ExtensionContext(chi)
        good = [m for m in models if cs.satisfied_by(m)]
        locs = sum(len(ctx.localizations(list(m))) for m in good)
        print(json.dumps({"models": len(models), "satisfying": len(good), "localizations": locs}))
        return
    out = Path(a.out) if a.out else None
    if out:
        out.write_text(cs.to_dimacs())
        out.with_name(out.name + ".map").write_text(cs.sidecar())
    else:
        sys.stdout.write(cs.to_dimacs())


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies suppress their defaults so flags given before the
    # subcommand are not overwritten
    def d(v):
        return argparse.SUPPRESS if suppress else v
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--jobs", type=int, default=d(1), help="worker processes")
    g.add_argument("--checkpoint-dir", default=d(None))
    g.add_argument("--limit-seconds", type=float, default=d(None))
    g.add_argument("--limit-entries", type=int, default=d(None))
    g.add_argument("--convention", action="append", default=d([]),
                   dest="convention_sub" if suppress else "convention",
                   help="diagonal=count|zero, missing=minimal|all (repeatable)")
    g.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return g


def build_parser() -> argparse.ArgumentParser:
    top = _global_flags(False)
    g = _global_flags(True)

    p = argparse.ArgumentParser(prog="neighborly", parents=[top],
                                description="Enumerate and analyze uniform neighborly oriented matroids.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[g], help="build catalogs level by level")
    s.add_argument("--rank", "-r", type=int, required=True)
    s.add_argument("--k", "-k", type=int, required=True)
    s.add_argument("--n", "-n", type=int, required=True, help="largest ground set size")
    s.add_argument("--out", "-o", required=True, help="output directory")
    s.add_argument("--face-rule", default="beneath-beyond", choices=("beneath-beyond", "literal", "old-only"))
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("analyze", parents=[g], help="per-entry invariants as JSON")
    s.add_argument("catalog")
    s.add_argument("--analyses", default=None, help="comma list")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("bfp", parents=[g], help="search non-realizability certificates")
    s.add_argument("catalog")
    s.add_argument("--entry", type=int, default=None, help="1-based entry (default: all)")
    s.add_argument("--cert-dir", default=None)
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_bfp)

    s = sub.add_parser("verify", parents=[g], help="check catalog entries, level consistency or a certificate")
    s.add_argument("catalog", nargs="?")
    s.add_argument("--lower", help="catalog one level below, for the deletion test")
    s.add_argument("--certificate")
    s.add_argument("--entry", type=int, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", parents=[g], help="per-level counts from catalog headers")
    s.add_argument("catalogs", nargs="+")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("dedupe", parents=[g], help="one representative per class")
    s.add_argument("catalogs", nargs="+")
    s.add_argument("--key", default="relabeling", choices=("relabeling", "facelattice", "graph"))
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_dedupe)

    s = sub.add_parser("dual", parents=[g], help="catalog of duals")
    s.add_argument("catalog")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("from-points", parents=[g], help="chirotope of an integer point configuration")
    s.add_argument("points", help="file with one point per line, or - for stdin")
    s.add_argument("--json", action="store_true", help="also report neighborliness checks")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_from_points)

    s = sub.add_parser("cnf", parents=[g], help="DIMACS export of the facet-sign constraints, or model import")
    s.add_argument("catalog")
    s.add_argument("--entry", type=int, default=1)
    s.add_argument("--k", "-k", type=int, required=True)
    s.add_argument("--models", help="file of models to complete instead of exporting")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_cnf)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.convention = args.convention + getattr(args, "convention_sub", [])
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        rc = args.func(args)
    except ResourceLimit as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, DegeneracyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if rc is None else rc


if __name__ == "__main__":
    sys.exit(main())
