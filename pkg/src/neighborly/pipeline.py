"""Catalog files, checkpointed level-by-level enumeration and reports.

Catalog layout::

    # neighborly catalog
    # r=5 n=9 k=2
    # signatures=863 compatible=554 ...
    5 9 ++-+... 0509a3...

Header lines are ``#`` comments holding ``key=value`` pairs; each entry is
``r n <sign-string>`` with an optional trailing hex key. Entries are sorted
by key, so the file for a given level is a pure function of its inputs.

Checkpoints live in ``<checkpoint-dir>/r{r}_k{k}_n{n}/base_{i:06d}.txt``,
one file per finished base entry, written atomically.
"""
from __future__ import annotations

import json
import logging
import os
import time
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing import get_context
from pathlib import Path

from . import __version__
from .analyze import ANALYSES, OPTIONAL_ANALYSES, entry_report
from .canon import chirotope_facet_key, chirotope_key, facet_complex_key
from .chirotope import Chirotope, delete, simplex
from .errors import ResourceLimit, UsageError
from .extend import ExtensionStats, iter_extensions
from .faces import facet_masks, is_k_neighborly, is_matroid_polytope

log = logging.getLogger(__name__)

STAT_FIELDS = ("signatures", "compatible", "localizations", "accepted", "classes", "face_lattices")


@dataclass
class Catalog:
    r: int
    n: int
    k: int | None = None
    meta: dict = field(default_factory=dict)
    entries: list = field(default_factory=list)     # Chirotope
    keys: list = field(default_factory=list)        # bytes or None, parallel to entries

    def __len__(self) -> int:
        return len(self.entries)

    def keyed(self):
        for chi, key in zip(self.entries, self.keys):
            yield chi, key if key is not None else chirotope_key(chi)


def _parse_meta(text: str) -> dict:
    out = {}
    for tok in text.split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            out[k] = v
    return out


def read_catalog(path) -> Catalog:
    meta: dict = {}
    entries, keys = [], []
    r = n = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                meta.update(_parse_meta(line[1:]))
                continue
            parts = line.split()
            if len(parts) not in (3, 4):
                raise UsageError(f"{path}:{lineno}: expected 'r n signs [key]'")
            chi = Chirotope.from_line(" ".join(parts[:3]))
            if r is None:
                r, n = chi.r, chi.n
            elif (chi.r, chi.n) != (r, n):
                raise UsageError(f"{path}:{lineno}: mixed (r, n) in one catalog")
            entries.append(chi)
            keys.append(bytes.fromhex(parts[3]) if len(parts) == 4 else None)
    if r is None:
        r, n = int(meta.get("r", 0)), int(meta.get("n", 0))
    k = int(meta["k"]) if "k" in meta else None
    return Catalog(r, n, k, meta, entries, keys)


def format_catalog(cat: Catalog) -> str:
    head = [f"# neighborly catalog (generator {cat.meta.get('generator', 'neighborly-' + __version__)})",
            f"# r={cat.r} n={cat.n}" + (f" k={cat.k}" if cat.k is not None else "")]
    extra = [f"{k}={cat.meta[k]}" for k in STAT_FIELDS if k in cat.meta]
    extra += [f"{k}={v}" for k, v in sorted(cat.meta.items())
              if k not in STAT_FIELDS and k not in ("r", "n", "k", "generator")]
    if extra:
        head.append("# " + " ".join(extra))
    body = []
    for chi, key in zip(cat.entries, cat.keys):
        body.append(chi.to_line() + (f" {key.hex()}" if key is not None else ""))
    return "\n".join(head + body) + "\n"


def _atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_catalog(path, cat: Catalog):
    _atomic_write(path, format_catalog(cat))


def catalog_from(chis, r, n, k=None, meta=None, *, keyed=True) -> Catalog:
    """Deduplicated, key-sorted catalog from a collection of chirotopes."""
    best: dict[bytes, Chirotope] = {}
    for chi in chis:
        key = chirotope_key(chi)
        cur = best.get(key)
        if cur is None or chi.to_line() < cur.to_line():
            best[key] = chi
    ks = sorted(best)
    return Catalog(r, n, k, dict(meta or {}), [best[x] for x in ks], list(ks) if keyed else [None] * len(ks))


def level_path(outdir, r, k, n) -> Path:
    return Path(outdir) / f"om_r{r}_k{k}_n{n}.txt"


# -- enumeration -----------------------------------------------------------------

@dataclass
class Guard:
    limit_seconds: float | None = None
    limit_entries: int | None = None
    started: float = field(default_factory=time.monotonic)

    def check(self, produced: int = 0):
        if self.limit_seconds is not None and time.monotonic() - self.started > self.limit_seconds:
            raise ResourceLimit(f"time limit of {self.limit_seconds}s reached")
        if self.limit_entries is not None and produced > self.limit_entries:
            raise ResourceLimit(f"entry limit of {self.limit_entries} exceeded ({produced})")


def _extend_base(args):
    line, k, face_rule = args
    chi = Chirotope.from_line(line)
    stats = ExtensionStats()
    best: dict[bytes, str] = {}
    for ext in iter_extensions(chi, k, stats, face_rule=face_rule):
        key = chirotope_key(ext)
        s = ext.to_line()
        if key not in best or s < best[key]:
            best[key] = s
    return stats, best


def _read_checkpoint(path):
    meta: dict = {}
    best: dict[bytes, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                meta.update(_parse_meta(line[1:]))
            elif line:
                a, b, c, key = line.split()
                best[bytes.fromhex(key)] = f"{a} {b} {c}"
    if meta.get("done") != "1":
        raise ValueError("incomplete checkpoint")
    stats = ExtensionStats(*(int(meta[f]) for f in ("signatures", "compatible", "localizations", "accepted")))
    return stats, best


def _write_checkpoint(path, stats, best):
    lines = [f"# signatures={stats.signatures} compatible={stats.compatible} "
             f"localizations={stats.localizations} accepted={stats.accepted}"]
    lines += [f"{best[key]} {key.hex()}" for key in sorted(best)]
    lines.append("# done=1")
    _atomic_write(path, "\n".join(lines) + "\n")


def extend_level(base: Catalog, k: int, *, jobs: int = 1, checkpoint_dir=None, guard: Guard | None = None,
                 face_rule: str = "beneath-beyond") -> Catalog:
    """All k-neighborly classes one element above the classes in ``base``."""
    guard = guard or Guard()
    r, n = base.r, base.n + 1
    ckdir = Path(checkpoint_dir) / f"r{r}_k{k}_n{n}" if checkpoint_dir else None
    total = ExtensionStats()
    merged: dict[bytes, str] = {}
    todo = []
    for i, chi in enumerate(base.entries):
        cp = ckdir / f"base_{i:06d}.txt" if ckdir else None
        if cp is not None and cp.exists():
            try:
                stats, best = _read_checkpoint(cp)
            except (ValueError, KeyError):
                todo.append(i)
                continue
            total += stats
            _merge(merged, best)
        else:
            todo.append(i)
    guard.check(len(merged))

    def finish(i, stats, best):
        nonlocal total
        if ckdir is not None:
            _write_checkpoint(ckdir / f"base_{i:06d}.txt", stats, best)
        total += stats
        _merge(merged, best)
        log.info("level n=%d: base %d/%d done, %d classes so far", n, i + 1, len(base.entries), len(merged))
        guard.check(len(merged))

    work = [(base.entries[i].to_line(), k, face_rule) for i in todo]
    if jobs > 1 and len(work) > 1:
        with get_context("spawn").Pool(jobs) as pool:
            for i, (stats, best) in zip(todo, pool.imap(_extend_base, work)):
                finish(i, stats, best)
    else:
        for i, w in zip(todo, work):
            guard.check(len(merged))
            stats, best = _extend_base(w)
            finish(i, stats, best)

    keys = sorted(merged)
    entries = [Chirotope.from_line(merged[x]) for x in keys]
    lattices = {chirotope_facet_key(c) for c in entries}
    meta = {"signatures": total.signatures, "compatible": total.compatible,
            "localizations": total.localizations, "accepted": total.accepted,
            "classes": len(entries), "face_lattices": len(lattices), "face_rule": face_rule}
    return Catalog(r, n, k, meta, entries, keys)


def _merge(into: dict, best: dict):
    for key, s in best.items():
        cur = into.get(key)
        if cur is None or s < cur:
            into[key] = s


def seed_catalog(r: int, k: int) -> Catalog:
    chi = simplex(r)
    meta = {"signatures": 0, "compatible": 0, "localizations": 0, "accepted": 0,
            "classes": 1, "face_lattices": 1}
    return Catalog(r, r, k, meta, [chi], [chirotope_key(chi)])


def enumerate_levels(r: int, k: int, n_target: int, outdir=None, *, jobs: int = 1, checkpoint_dir=None,
                     limit_seconds=None, limit_entries=None, face_rule: str = "beneath-beyond",
                     progress=None) -> list[Catalog]:
    """Catalogs for n = r .. n_target, resuming from finished level files in outdir."""
    if r < 3:
        raise UsageError("rank must be at least 3")
    if not 1 <= k <= (r - 1) // 2:
        raise UsageError(f"k must lie in 1..{(r - 1) // 2} for rank {r}")
    if n_target < r:
        raise UsageError("target size must be at least the rank")
    guard = Guard(limit_seconds, limit_entries)
    if checkpoint_dir is None and outdir is not None:
        checkpoint_dir = Path(outdir) / "checkpoints"
    cats = []
    cat = seed_catalog(r, k)
    for n in range(r, n_target + 1):
        path = level_path(outdir, r, k, n) if outdir is not None else None
        if n > r:
            if path is not None and path.exists():
                cat = read_catalog(path)
            else:
                cat = extend_level(cat, k, jobs=jobs, checkpoint_dir=checkpoint_dir, guard=guard,
                                   face_rule=face_rule)
        if path is not None and not path.exists():
            write_catalog(path, cat)
        cats.append(cat)
        if progress:
            progress(cat)
    return cats


# -- reports ---------------------------------------------------------------------

def stats(cat: Catalog) -> dict:
    out = {"r": cat.r, "n": cat.n, "k": cat.k, "entries": len(cat.entries), "warnings": []}
    for f in STAT_FIELDS:
        if f in cat.meta:
            out[f] = int(cat.meta[f])
        else:
            out[f] = None
            out["warnings"].append(f"metadata field '{f}' missing")
    return out


def _analyze_one(args):
    line, key, sel, diagonal, missing = args
    chi = Chirotope.from_line(line)
    rec = entry_report(chi, key, diagonal=diagonal, missing=missing,
                       analyses=[a for a in sel if a != "bfp"])
    if "bfp" in sel:
        from .bfp import bfp_nonrealizable
        rec["bfp_nonrealizable"], _ = bfp_nonrealizable(chi)
    return rec


def analyze_catalog(cat: Catalog, analyses=None, *, diagonal: str = "count", missing: str = "minimal",
                    jobs: int = 1) -> dict:
    sel = list(analyses) if analyses else list(ANALYSES)
    known = set(ANALYSES) | set(OPTIONAL_ANALYSES)
    for a in sel:
        if a not in known:
            raise UsageError(f"unknown analysis {a!r}; choose from {sorted(known)}")
    work = [(chi.to_line(), key, sel, diagonal, missing) for chi, key in cat.keyed()]
    if jobs > 1 and len(work) > 1:
        with get_context("spawn").Pool(jobs) as pool:
            recs = pool.map(_analyze_one, work)
    else:
        recs = [_analyze_one(w) for w in work]
    hist = {}
    for field_, name in (("universal_edge_count", "universal_edges"), ("diameter", "diameter"),
                         ("hamiltonian", "hamiltonian"), ("sstar_k", "sstar"),
                         ("bfp_nonrealizable", "bfp")):
        vals = [rec[field_] for rec in recs if field_ in rec]
        if vals:
            hist[name] = {str(k): v for k, v in sorted(Counter(vals).items(), key=lambda kv: str(kv[0]))}
    if any("detA" in rec for rec in recs):
        hist["distinct_detA"] = len({rec["detA"] for rec in recs})
        hist["distinct_detM"] = len({rec["detM"] for rec in recs})
    return {"r": cat.r, "n": cat.n, "count": len(recs),
            "conventions": {"diagonal": diagonal, "missing": missing},
            "entries": recs, "histograms": hist}


def verify_levels(lower: Catalog, upper: Catalog) -> list[tuple[int, int]]:
    """(entry index, element) pairs whose deletion is missing from the lower catalog."""
    known = {key for _, key in lower.keyed()}
    bad = []
    for i, chi in enumerate(upper.entries):
        for e in range(chi.n):
            if chirotope_key(delete(chi, e)) not in known:
                bad.append((i, e))
    return bad


def verify_entries(cat: Catalog, k: int | None = None) -> list[int]:
    """Indices of entries that fail the matroid-polytope / k-neighborly / key checks."""
    k = cat.k if k is None else k
    bad = []
    for i, (chi, key) in enumerate(zip(cat.entries, cat.keys)):
        ok = is_matroid_polytope(chi)
        if ok and k and 1 <= k <= (chi.r - 1) // 2:
            ok = is_k_neighborly(chi, k)
        if ok and key is not None:
            ok = chirotope_key(chi) == key
        if not ok:
            bad.append(i)
    return bad


def face_lattice_census(cat: Catalog) -> int:
    return len({facet_complex_key(facet_masks(c), c.n) for c in cat.entries})


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=1, sort_keys=True)
    if path is not None:
        _atomic_write(path, text + "\n")
    return text
