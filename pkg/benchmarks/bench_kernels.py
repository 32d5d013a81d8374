"""Compiled vs pure-Python kernel timings on real enumeration workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

from neighborly import kernels
from neighborly.chirotope import alternating
from neighborly.extend import ExtensionContext, extend_all, facet_constraints, signature_masks


def workloads():
    """(label, callable taking a kernel namespace) pairs."""
    base7 = alternating(5, 7)
    base8 = extend_all(base7, 2)[0]
    out = []
    for label, chi in (("OM(5,7)", base7), ("OM(5,8)", base8)):
        cs = facet_constraints(chi, 2)
        pos, neg = cs.masks()
        out.append((f"sat_all {label} ({cs.nvars} vars, {len(pos)} clauses)",
                    lambda impl, nv=cs.nvars, p=pos, q=neg: impl.sat_all(nv, p, q)))
        ctx = ExtensionContext(chi)
        sigmas = [ctx.initial_sigma(T) for T in signature_masks(cs)]
        out.append((f"localizations {label} ({len(sigmas)} signatures)",
                    lambda impl, ss=sigmas, c=ctx: [impl.localizations(s, c.col_h, c.col_s, 0) for s in ss]))
    return out


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        res = fn()
        best = min(best, time.perf_counter() - t)
    return best, res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    names = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    if len(names) == 1:
        print("compiled kernels not built; timing the pure-Python backend only")
    print(f"{'workload':<55} " + " ".join(f"{n:>10}" for n in names) + "   speedup")
    for label, fn in workloads():
        times, results = [], []
        for n in names:
            t, res = best_of(lambda: fn(kernels.backend(n)), a.repeat)
            times.append(t)
            results.append(res)
        if len(results) == 2 and results[0] != results[1]:
            raise SystemExit(f"backends disagree on {label}")
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else ""
        print(f"{label:<55} " + " ".join(f"{t:9.4f}s" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
