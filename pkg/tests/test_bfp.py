import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from scipy.optimize import linprog

from neighborly.bfp import (Feasible, Infeasible, biquadratic_inequalities, bfp_nonrealizable, certificate_from_json,
                            certificate_json, lp_feasible_strict, toy_system, verify_certificate)
from neighborly.chirotope import Chirotope, alternating, is_gp_consistent
from neighborly.errors import UsageError
from neighborly.exactlp import kernel_basis, nonneg_solution
from neighborly.linalg import det_exact

from conftest import random_points


def test_toy_cycle_is_infeasible_with_unit_multipliers():
    sys = toy_system([(0, 1), (1, 0)], 2)
    res = lp_feasible_strict(sys)
    assert isinstance(res, Infeasible)
    assert res.certificate == {0: 1, 1: 1}
    assert verify_certificate(sys, res.certificate)


def test_toy_chain_is_feasible_with_a_witness():
    sys = toy_system([(0, 1), (1, 2)], 3)
    res = lp_feasible_strict(sys)
    assert isinstance(res, Feasible)
    assert res.witness is not None and sys.satisfied_by(res.witness)
    assert isinstance(lp_feasible_strict(toy_system([(0, 1), (1, 2), (2, 0)], 3)), Infeasible)


def test_float_path_agrees_with_exact_path_on_toys():
    rng = random.Random(3)
    for _ in range(30):
        nv = rng.randint(2, 6)
        pairs = [tuple(rng.sample(range(nv), 2)) for _ in range(rng.randint(1, 8))]
        sys = toy_system(pairs, nv)
        a = lp_feasible_strict(sys, exact_only=True)
        b = lp_feasible_strict(sys, exact_only=False)
        assert a.feasible == b.feasible
        if not a.feasible:
            assert verify_certificate(sys, a.certificate) and verify_certificate(sys, b.certificate)


def test_realizable_chirotope_satisfies_its_log_magnitudes():
    # for points, y = log|det| solves every inequality of the system
    rng = random.Random(5)
    pts, chi = random_points(rng, 3, 7)
    sys = biquadratic_inequalities(chi)
    rows = [p + [1] for p in pts]
    y = [math.log(abs(det_exact([rows[i] for i in lam]))) for lam in combinations(range(7), 4)]
    slack = [sum(c * y[v] for v, c in q.form().items()) for q in sys.rows]
    assert min(slack) > 0
    ok, cert = bfp_nonrealizable(chi)
    assert not ok and cert is None


def test_cyclic_polytope_is_feasible():
    ok, _ = bfp_nonrealizable(alternating(5, 10))
    assert not ok


def test_certificate_checks_reject_tampering():
    sys = toy_system([(0, 1), (1, 0), (1, 2)], 3)
    res = lp_feasible_strict(sys)
    cert = res.certificate
    assert verify_certificate(sys, cert)
    assert not verify_certificate(sys, {})
    assert not verify_certificate(sys, {**cert, 0: Fraction(-1)})
    assert not verify_certificate(sys, {**cert, 0: Fraction(2)})
    with pytest.raises(UsageError):
        verify_certificate(sys, {99: Fraction(1)})


def test_certificate_json_round_trip():
    sys = toy_system([(0, 1), (1, 0)], 2)
    cert = lp_feasible_strict(sys).certificate
    js = certificate_json(sys, cert)
    assert {"tau", "quad", "dominant", "versus", "multiplier-numerator", "multiplier-denominator"} <= set(js[0])
    assert certificate_from_json(sys, js) == cert
    with pytest.raises(UsageError):
        certificate_from_json(sys, [dict(js[0], quad=[9, 9, 9, 9])])


def test_gp_inconsistent_input_is_rejected():
    chi = alternating(3, 6)
    for i in range(len(chi.signs)):
        s = chi.signs.copy()
        s[i] = -s[i]
        bad = Chirotope(3, 6, s)
        if not is_gp_consistent(bad):
            break
    with pytest.raises(UsageError):
        biquadratic_inequalities(bad)


def test_inequality_rows_per_relation():
    chi = alternating(4, 6)
    sys = biquadratic_inequalities(chi)
    # two strict inequalities per three-term relation: tau in C(6,2), quad in C(4,4)
    assert len(sys) == 2 * math.comb(6, 2) * math.comb(4, 4)
    for q in sys.rows:
        assert q.dominant != q.versus and sum(q.form().values()) == 0


def test_nonneg_solution_against_scipy():
    rng = np.random.default_rng(9)
    for _ in range(60):
        m, n = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        A = rng.integers(-3, 4, size=(m, n))
        b = rng.integers(-3, 4, size=m)
        x = nonneg_solution(A.tolist(), b.tolist())
        ref = linprog(np.zeros(n), A_eq=A, b_eq=b, bounds=[(0, None)] * n, method="highs")
        assert (x is not None) == (ref.status == 0)
        if x is not None:
            assert all(v >= 0 for v in x)
            assert all(sum(int(A[i, j]) * x[j] for j in range(n)) == int(b[i]) for i in range(m))


def test_nonneg_solution_shape_check():
    with pytest.raises(ValueError):
        nonneg_solution([[1, 1]], [1, 2])
    assert nonneg_solution([[1, -1], [1, 1]], [3, 1]) is None
    assert nonneg_solution([{0: 1, 1: 1}], [2]) is not None


def test_kernel_basis_dimension_and_exactness():
    rng = np.random.default_rng(4)
    for _ in range(30):
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 7))
        A = rng.integers(-2, 3, size=(m, n))
        cols = [{i: int(A[i, c]) for i in range(m)} for c in range(n)]
        B = kernel_basis(cols, n)
        assert len(B) == n - np.linalg.matrix_rank(A)
        for x in B:
            assert all(sum(int(A[i, c]) * x[c] for c in range(n)) == 0 for i in range(m))
