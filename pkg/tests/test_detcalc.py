import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylorpade.detcalc import (
    EvaluatedMatrix,
    adjugate,
    block_grad_det_at,
    det_berkowitz,
    det_exact,
    det_field,
    det_in_ring,
    det_modp,
    evaluate_at,
    expand_det_poly,
    grad_det_at,
    hessian_det_at,
    jet_grad_det,
    jet_hessian_entry,
    rank_at,
)
from taylorpade.errors import UsageError
from taylorpade.fields import PRIMES_62, JetRing, PrimeField, Rationals, random_point
from taylorpade.pade import SymbolicMatrix, pade_matrix
from taylorpade.series import monomials_upto

P62 = PRIMES_62[0]


def _perm_det(A):
    """Permutation-expansion determinant, the brute-force oracle."""
    n = len(A)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if not seen[i]:
                j, ln = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    ln += 1
                if ln % 2 == 0:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= A[i][perm[i]]
        total += term
    return total


def _rand_int_matrix(rng, k, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(k)] for _ in range(k)]


def test_det_modp_trivials(gf):
    k = 5
    ident = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    assert det_modp(ident, gf.p) == 1
    repeated = [[1, 2, 3], [4, 5, 6], [1, 2, 3]]
    assert det_modp(repeated, gf.p) == 0
    assert det_modp([[1, 2], [3, 4]], gf.p) == gf.p - 2


def test_det_modp_non_square(gf):
    with pytest.raises(UsageError):
        det_modp([[1, 2, 3], [4, 5, 6]], gf.p)


def test_det_exact_trivials():
    assert det_exact([[1, 1, 1]] * 3) == 0
    assert det_exact([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30
    assert det_exact([[Fraction(1, 2), 1], [1, Fraction(1, 3)]]) == Fraction(1, 6) - 1


def test_det_exact_matches_brute_force():
    rng = random.Random(0)
    for k in range(1, 5):
        for _ in range(5):
            A = _rand_int_matrix(rng, k)
            assert det_exact(A) == _perm_det(A)


def test_det_exact_cross_det_modp(gf):
    rng = random.Random(1)
    for _ in range(10):
        A = _rand_int_matrix(rng, 6)
        exact = det_exact(A)
        assert exact.denominator == 1
        assert det_modp(A, gf.p) == exact.numerator % gf.p
        # a nonzero modular value certifies a nonzero exact determinant
        if det_modp(A, gf.p) != 0:
            assert exact != 0


def test_rank_trivials(gf):
    assert rank_at([[0, 0], [0, 0]], gf) == 0
    assert rank_at([[1, 0, 0], [0, 1, 0], [0, 0, 1]], gf) == 3
    rng = random.Random(2)
    u = [rng.randrange(1, gf.p) for _ in range(5)]
    v = [rng.randrange(1, gf.p) for _ in range(7)]
    outer = [[gf.mul(a, b) for b in v] for a in u]
    assert rank_at(outer, gf) == 1


def test_rank_rectangular(qq):
    assert rank_at([[1, 2, 3], [2, 4, 6]], qq) == 1
    assert rank_at([[Fraction(1, 2)], [Fraction(1, 3)]], qq) == 1


def test_adjugate_identity_prime_field(gf):
    rng = random.Random(3)
    for k in range(1, 11):
        A = [[rng.randrange(gf.p) for _ in range(k)] for _ in range(k)]
        adj = adjugate(A, gf)
        det = det_field(A, gf)
        prod = [
            [sum(A[i][t] * adj[t][j] for t in range(k)) % gf.p for j in range(k)]
            for i in range(k)
        ]
        for i in range(k):
            for j in range(k):
                assert prod[i][j] == (det if i == j else 0)


def test_adjugate_identity_rationals_and_singular(qq):
    rng = random.Random(4)
    for k in range(2, 11):
        A = [[Fraction(rng.randint(-5, 5)) for _ in range(k)] for _ in range(k)]
        if k % 2 == 0:
            A[-1] = A[0][:]  # force singularity on even sizes
        adj = adjugate(A, qq)
        det = det_field(A, qq)
        if k % 2 == 0:
            assert det == 0
        for i in range(k):
            for j in range(k):
                s = sum(A[i][t] * adj[t][j] for t in range(k))
                assert s == (det if i == j else 0)


def test_berkowitz_matches_elimination(gf):
    rng = random.Random(5)
    for k in range(1, 7):
        A = _rand_int_matrix(rng, k)
        Amod = [[x % gf.p for x in row] for row in A]
        assert det_berkowitz(Amod, gf) == det_modp(Amod, gf.p)
        assert det_berkowitz(A, Rationals()) == _perm_det(A)


def test_jet_det_identity_plus_epsilon(gf):
    ring = JetRing(gf, order=2)
    for k in (2, 4):
        for diag in (True, False):
            jets = [
                [ring.one if i == j else ring.zero for j in range(k)]
                for i in range(k)
            ]
            if diag:
                jets[1][1] = ring.add(jets[1][1], ring.variable(0, 0))
                expect = ring.add(ring.one, ring.variable(0, 0))
            else:
                jets[0][1] = ring.variable(0, 0)
                expect = ring.one
            assert det_in_ring(jets, ring) == expect
            assert det_berkowitz(jets, ring) == expect


def test_grad_generic_2x2(gf):
    P = SymbolicMatrix([[("a",), ("b",)], [("c",), ("d",)]])
    pt = {("a",): 2, ("b",): 3, ("c",): 5, ("d",): 7}
    grad = grad_det_at(P, pt, gf)
    assert grad[("a",)] == 7
    assert grad[("d",)] == 2
    assert grad[("b",)] == gf.neg(5)
    assert grad[("c",)] == gf.neg(3)
    assert ("z",) not in grad


def _random_pattern(rng, max_size=8, repeat=True):
    k = rng.randint(2, max_size)
    nv = rng.randint(2, k * k if repeat else k * k)
    vars_ = [(i,) for i in range(nv)]
    entries = [
        [vars_[rng.randrange(nv)] if rng.random() < 0.85 else None for _ in range(k)]
        for _ in range(k)
    ]
    return SymbolicMatrix(entries)


def _nonsingular_point(P, field, rng):
    for _ in range(50):
        pt = {g: field.sample(rng) for g in P.variables()}
        if det_field(P.evaluate(pt, field), field) != field.zero:
            return pt
    return None


def test_grad_matches_jet_oracle_on_random_patterns(gf):
    rng = random.Random(6)
    done = 0
    while done < 10:
        P = _random_pattern(rng, max_size=6)
        pt = {g: gf.sample(rng) for g in P.variables()}
        assert grad_det_at(P, pt, gf) == jet_grad_det(P, pt, gf)
        done += 1


def test_grad_matches_jet_oracle_on_pade(gf):
    P = pade_matrix(2, 5, 4, 7)
    pt = random_point(P.variables(), gf, 9)
    assert grad_det_at(P, pt, gf) == jet_grad_det(P, pt, gf)


def test_hessian_generic_2x2(gf):
    P = SymbolicMatrix([[("a",), ("b",)], [("c",), ("d",)]])
    pt = {("a",): 2, ("b",): 3, ("c",): 5, ("d",): 7}
    labels, H = hessian_det_at(P, pt, gf, "essential")
    idx = {g: i for i, g in enumerate(labels)}
    assert H[idx[("a",)]][idx[("d",)]] == 1
    assert H[idx[("a",)]][idx[("b",)]] == 0
    assert H[idx[("a",)]][idx[("a",)]] == 0
    assert H[idx[("b",)]][idx[("c",)]] == gf.p - 1


def test_hessian_symmetry_and_jet_agreement(gf):
    rng = random.Random(7)
    done = 0
    while done < 10:
        P = _random_pattern(rng, max_size=5)
        pt = _nonsingular_point(P, gf, rng)
        if pt is None:
            continue
        labels, H = hessian_det_at(P, pt, gf, "essential")
        for i in range(len(labels)):
            for j in range(i, len(labels)):
                assert H[i][j] == H[j][i]
                assert H[i][j] == jet_hessian_entry(P, pt, gf, labels[i], labels[j])
        done += 1


def test_hessian_full_mode_zero_rows(gf):
    P = pade_matrix(2, 5, 4, 7)
    pt = random_point(P.variables(), gf, 10)
    labels, H = hessian_det_at(P, pt, gf, "full")
    assert len(labels) == 36
    occurring = set(P.variables())
    missing = {g for g in labels if g not in occurring}
    assert missing == {(0, 0), (1, 0), (0, 1)}
    for i, g in enumerate(labels):
        row_is_zero = all(x == 0 for x in H[i])
        col_is_zero = all(H[r][i] == 0 for r in range(len(labels)))
        assert row_is_zero == (g in missing)
        assert col_is_zero == (g in missing)


def test_hessian_singular_point_fallback_matches_symbolic(gf):
    # generic 3x3 pattern, point chosen with row3 = row1 + row2 so the
    # evaluation is singular and the jet fallback is exercised
    names = [(i,) for i in range(9)]
    P = SymbolicMatrix([names[0:3], names[3:6], names[6:9]])
    rng = random.Random(8)
    vals = [rng.randrange(1, 100) for _ in range(6)]
    pt = dict(zip(names[:6], vals))
    for t in range(3):
        pt[names[6 + t]] = (vals[t] + vals[3 + t]) % gf.p
    A = P.evaluate(pt, gf)
    assert det_field(A, gf) == 0
    labels, H = hessian_det_at(P, pt, gf, "essential")
    f = expand_det_poly(P, labels)
    values = [pt[g] for g in labels]
    for i in range(9):
        for j in range(9):
            expect = f.diff(i).diff(j).eval(gf, values)
            assert H[i][j] == expect


def test_euler_identity_on_patterns(gf):
    rng = random.Random(9)
    for _ in range(5):
        P = _random_pattern(rng, max_size=6)
        pt = {g: gf.sample(rng) for g in P.variables()}
        f_val = det_field(P.evaluate(pt, gf), gf)
        grad = grad_det_at(P, pt, gf)
        s = sum(pt[g] * v for g, v in grad.items()) % gf.p
        assert s == P.nrows * f_val % gf.p


def test_block_grad_sums_to_full_gradient(gf):
    P = pade_matrix(2, 5, 4, 7)
    pt = random_point(P.variables(), gf, 11)
    bg = block_grad_det_at(P, pt, gf)
    full = grad_det_at(P, pt, gf)
    agg = {}
    for (j, g), v in bg.items():
        agg[g] = gf.add(agg.get(g, 0), v)
    assert agg == full


def _float_det(A):
    A = [row[:] for row in A]
    n = len(A)
    det = 1.0
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(A[i][k]))
        if abs(A[piv][k]) < 1e-12:
            return 0.0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    return det


def test_gradient_matches_central_finite_differences(qq):
    rng = random.Random(10)
    P = _random_pattern(rng, max_size=4)
    pt = {g: Fraction(rng.randint(1, 9)) for g in P.variables()}
    grad = grad_det_at(P, pt, qq)
    h = 1e-6
    for g, exact in grad.items():
        up = dict(pt)
        dn = dict(pt)
        up[g] = float(up[g]) + h
        dn[g] = float(dn[g]) - h
        up = {k: float(v) for k, v in up.items()}
        dn = {k: float(v) for k, v in dn.items()}
        approx = (_float_det(P.evaluate(up, Rationals())) -
                  _float_det(P.evaluate(dn, Rationals()))) / (2 * h)
        assert approx == pytest.approx(float(exact), rel=1e-6, abs=1e-4)


def test_expand_det_poly_matches_brute_force(gf):
    rng = random.Random(11)
    P = _random_pattern(rng, max_size=4)
    labels = P.variables()
    f = expand_det_poly(P, labels)
    for _ in range(5):
        pt = {g: gf.sample(rng) for g in labels}
        direct = det_field(P.evaluate(pt, gf), gf)
        assert f.eval(gf, [pt[g] for g in labels]) == direct


def test_evaluated_matrix_wrapper(gf):
    P = pade_matrix(2, 1, 1, 2)
    pt = random_point(P.variables(), gf, 12)
    M = evaluate_at(P, pt, gf)
    assert M.shape == (3, 3)
    assert M.source is P and M.point == pt
    assert det_modp(M) == det_modp(M.data, gf.p)
    assert rank_at(M) == rank_at(M.data, gf)


def test_evaluate_missing_variable_raises(gf):
    P = pade_matrix(2, 1, 1, 2)
    with pytest.raises(UsageError):
        P.evaluate({}, gf)
