import os
import random
from pathlib import Path

import numpy as np
import pytest

from neighborly.chirotope import Chirotope
from neighborly.tables import gp_table


@pytest.fixture(scope="session")
def catalog_root(tmp_path_factory):
    """Where enumerated levels live; set NEIGHBORLY_TEST_CACHE to reuse them across runs."""
    env = os.environ.get("NEIGHBORLY_TEST_CACHE")
    if env:
        p = Path(env)
        p.mkdir(parents=True, exist_ok=True)
        return p
    return tmp_path_factory.mktemp("catalogs")


def all_uniform_chirotopes(r, n):
    """Every sign vector over the r-subsets of n elements that passes the 3-term relations."""
    m = len(Chirotope(r, n, np.ones(_binom(n, r), dtype=np.int8)).signs)
    idx, par, _ = gp_table(n, r)
    out = []
    step = 1 << 16
    for start in range(0, 1 << m, step):
        codes = np.arange(start, min(start + step, 1 << m), dtype=np.int64)
        S = np.where((codes[:, None] >> np.arange(m)) & 1, 1, -1).astype(np.int8)
        if len(idx):
            v = S[:, idx] * par
            t1 = v[:, :, 0] * v[:, :, 1]
            t2 = -v[:, :, 2] * v[:, :, 3]
            t3 = v[:, :, 4] * v[:, :, 5]
            S = S[~((t1 == t2) & (t2 == t3)).any(axis=1)]
        out.extend(Chirotope(r, n, s) for s in S)
    return out


def _binom(n, k):
    from math import comb
    return comb(n, k)


def random_points(rng, d, n, lo=-30, hi=30):
    from neighborly.chirotope import chirotope_from_points
    from neighborly.errors import DegeneracyError
    while True:
        pts = [[rng.randint(lo, hi) for _ in range(d)] for _ in range(n)]
        try:
            return pts, chirotope_from_points(pts)
        except DegeneracyError:
            continue


@pytest.fixture
def rng():
    return random.Random(12345)


# -- acceptance summary -------------------------------------------------------

_ACCEPTANCE: dict[int, list] = {}


@pytest.fixture(scope="session")
def acceptance():
    """record(criterion, ok, detail): collected into one PASS/FAIL line per criterion."""
    def record(criterion: int, ok: bool, detail: str):
        _ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
        return ok
    return record


def acceptance_lines() -> list[str]:
    out = []
    for c in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[c]
        ok = all(p for p, _ in parts)
        out.append(f"{'PASS' if ok else 'FAIL'} criterion {c:2d}: " + "; ".join(d for _, d in parts))
    return out


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
