"""Exact determinants, ranks, adjugates, and derivatives of determinants.

Two independent routes to the derivatives of det(P) at a point:

* the adjugate/trace route (Jacobi's formula and its second-order extension),
  which costs one matrix inversion plus trace products, and
* a forward-mode jet route that evaluates the determinant over the base field
  extended by infinitesimals and reads derivatives off epsilon coefficients.

The jet route is the oracle and the fallback at points where the evaluated
matrix is singular; the adjugate route is the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import UsageError
from .fields import Jet, JetRing, PrimeField
from .series import SparsePoly, monomials_upto
from .pade import SymbolicMatrix


@dataclass
class EvaluatedMatrix:
    """Numeric matrix plus its provenance (the pattern and point, if any)."""

    data: list
    field: object
    source: SymbolicMatrix | None = None
    point: dict | None = None

    @property
    def shape(self):
        return (len(self.data), len(self.data[0]) if self.data else 0)


def evaluate_at(P: SymbolicMatrix, point: dict, field) -> EvaluatedMatrix:
    return EvaluatedMatrix(P.evaluate(point, field), field, source=P, point=point)


def _rows_of(M) -> list:
    return M.data if isinstance(M, EvaluatedMatrix) else M


def det_modp(M, p: int | None = None) -> int:
    """Determinant over GF(p) by elimination with first-nonzero pivoting."""
    if p is None:
        if not (isinstance(M, EvaluatedMatrix) and isinstance(M.field, PrimeField)):
            raise UsageError("det_modp needs a prime-field matrix or an explicit p")
        p = M.field.p
    A = [[x % p for x in row] for row in _rows_of(M)]
    n = len(A)
    if any(len(row) != n for row in A):
        raise UsageError("determinant of a non-square matrix")
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        akk = A[k][k]
        det = det * akk % p
        inv = pow(akk, -1, p)
        row_k = A[k]
        for i in range(k + 1, n):
            f = A[i][k]
            if f:
                f = f * inv % p
                row_i = A[i]
                for j in range(k, n):
                    row_i[j] = (row_i[j] - f * row_k[j]) % p
    return det % p


def det_exact(M) -> Fraction:
    """Exact determinant of an integer or rational matrix.

    Rows are scaled integral first, then eliminated fraction-free
    (Bareiss), so intermediate values stay integers that divide exactly.
    """
    rows = _rows_of(M)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise UsageError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    A = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = lcm(*(f.denominator for f in fr)) if fr else 1
        scale *= den
        A.append([int(f * den) for f in fr])
    return Fraction(_det_bareiss_int(A), 1) / scale


def _det_bareiss_int(A: list) -> int:
    A = [row[:] for row in A]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        pivot = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i = A[i]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * A[n - 1][n - 1]


def rank_at(M, field=None) -> int:
    """Exact rank over the field of evaluation (rectangular allowed)."""
    if field is None:
        if not isinstance(M, EvaluatedMatrix):
            raise UsageError("rank_at needs a field when given raw rows")
        field = M.field
    A = [row[:] for row in _rows_of(M)]
    if not A:
        return 0
    nrows, ncols = len(A), len(A[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if not field.is_zero(A[i][col])), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = field.inv(A[row][col])
        for i in range(row + 1, nrows):
            f = A[i][col]
            if not field.is_zero(f):
                f = field.mul(f, inv)
                for j in range(col, ncols):
                    A[i][j] = field.sub(A[i][j], field.mul(f, A[row][j]))
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


def inverse_field(A: list, field):
    """Inverse over a field, or None when singular."""
    n = len(A)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(A)]
    for k in range(n):
        piv = next((i for i in range(k, n) if not field.is_zero(aug[i][k])), None)
        if piv is None:
            return None
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = field.inv(aug[k][k])
        aug[k] = [field.mul(inv, x) for x in aug[k]]
        for i in range(n):
            if i != k and not field.is_zero(aug[i][k]):
                f = aug[i][k]
                aug[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(aug[i], aug[k])]
    return [row[n:] for row in aug]


def det_field(A: list, field):
    """Determinant over a field by generic elimination."""
    A = [row[:] for row in A]
    n = len(A)
    det = field.one
    for k in range(n):
        piv = next((i for i in range(k, n) if not field.is_zero(A[i][k])), None)
        if piv is None:
            return field.zero
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = field.neg(det)
        det = field.mul(det, A[k][k])
        inv = field.inv(A[k][k])
        for i in range(k + 1, n):
            if not field.is_zero(A[i][k]):
                f = field.mul(A[i][k], inv)
                A[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(A[i], A[k])]
    return det


def adjugate(A: list, field) -> list:
    """adj(A) with A*adj(A) = det(A)*I, defined also for singular A."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise UsageError("adjugate of a non-square matrix")
    if n == 1:
        return [[field.one]]
    det = det_field(A, field)
    if not field.is_zero(det):
        inv = inverse_field(A, field)
        return [[field.mul(det, inv[i][j]) for j in range(n)] for i in range(n)]
    # Singular case: cofactor by minors, O(n^5) but exercised rarely.
    adj = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [A[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            cof = det_field(minor, field)
            if (i + j) % 2:
                cof = field.neg(cof)
            adj[j][i] = cof
    return adj


class _PivotFailure(Exception):
    pass


def det_in_ring(A: list, ring):
    """Determinant over a commutative ring.

    Elimination with pivoting on ring units is attempted first (cheap, and
    always succeeds over a field); if no unit pivot is available the
    division-free Berkowitz algorithm finishes the job.
    """
    try:
        return _det_elimination_units(A, ring)
    except _PivotFailure:
        return det_berkowitz(A, ring)


def _det_elimination_units(A: list, ring):
    A = [row[:] for row in A]
    n = len(A)
    det = ring.one
    for k in range(n):
        piv = next((i for i in range(k, n) if ring.is_unit(A[i][k])), None)
        if piv is None:
            if all(ring.is_zero(A[i][k]) for i in range(k, n)):
                return ring.zero
            raise _PivotFailure
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = ring.neg(det)
        det = ring.mul(det, A[k][k])
        inv = ring.inv(A[k][k])
        for i in range(k + 1, n):
            if not ring.is_zero(A[i][k]):
                f = ring.mul(A[i][k], inv)
                A[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(A[i], A[k])]
    return det


def det_berkowitz(A: list, ring):
    """Division-free determinant (Berkowitz), valid over any commutative ring."""
    n = len(A)
    if n == 0:
        return ring.one
    if any(len(row) != n for row in A):
        raise UsageError("determinant of a non-square matrix")
    add, mul, neg = ring.add, ring.mul, ring.neg
    # vec holds the characteristic vector of the leading k x k submatrix.
    vec = [ring.one, neg(A[0][0])]
    for k in range(2, n + 1):
        a = A[k - 1][k - 1]
        R = A[k - 1][: k - 1]
        C = [A[i][k - 1] for i in range(k - 1)]
        t = [ring.one, neg(a)]
        v = C
        for _ in range(k - 1):
            s = ring.zero
            for x, y in zip(R, v):
                s = add(s, mul(x, y))
            t.append(neg(s))
            if len(t) == k + 1:
                break
            v = [_dot(ring, A[i][: k - 1], v) for i in range(k - 1)]
        new = []
        for i in range(k + 1):
            s = ring.zero
            for j in range(max(0, i - k), min(i, k - 1) + 1):
                s = add(s, mul(t[i - j], vec[j]))
            new.append(s)
        vec = new
    det = vec[n]
    return det if n % 2 == 0 else neg(det)


def _dot(ring, xs, ys):
    s = ring.zero
    for x, y in zip(xs, ys):
        s = ring.add(s, ring.mul(x, y))
    return s


def grad_det_at(P: SymbolicMatrix, point: dict, field) -> dict:
    """All partial derivatives of det(P) with respect to its variables.

    For each variable g, sums the cofactors of the evaluated matrix at the
    occurrence positions of g (Jacobi's formula: d det = tr(adj(A) dA)).
    Defined also when the evaluation is singular.
    """
    if not P.is_square:
        raise UsageError("gradient of det needs a square matrix")
    A = P.evaluate(point, field)
    adj = adjugate(A, field)
    grad = {}
    for g, occ in P.occurrences().items():
        s = field.zero
        for r, c in occ:
            s = field.add(s, adj[c][r])
        grad[g] = s
    return grad


def block_grad_det_at(P: SymbolicMatrix, point: dict, field) -> dict:
    """Per-block cofactor sums of det(P): (block j, variable g) -> value.

    A variable occurring in several column blocks contributes separately per
    block; summing over blocks recovers the full partial derivative from
    ``grad_det_at``.  These block-restricted sums are exactly what the
    derivative of a column operation supported on one block produces, and
    they are the entries of the relation matrix.
    """
    if not P.is_square:
        raise UsageError("gradient of det needs a square matrix")
    if P.col_labels is None:
        raise UsageError("block gradient needs a matrix with column blocks")
    A = P.evaluate(point, field)
    adj = adjugate(A, field)
    out: dict = {}
    for g, occ in P.occurrences().items():
        for r, c in occ:
            key = (P.col_labels[c].block, g)
            prev = out.get(key, field.zero)
            out[key] = field.add(prev, adj[c][r])
    return out


def _variable_list(P: SymbolicMatrix, variable_set: str) -> list:
    if variable_set == "essential":
        return P.variables()
    if variable_set == "full":
        if P.params is None:
            raise UsageError("full variable set needs the matrix parameters")
        n, d, e, m = P.params
        return monomials_upto(n, m)
    raise UsageError(f"unknown variable set {variable_set!r}")


def hessian_det_at(
    P: SymbolicMatrix, point: dict, field, variable_set: str = "essential"
) -> tuple:
    """Second-derivative matrix of det(P) at a point.

    Returns (labels, H) with H[a][b] = d^2 det / dc_a dc_b.  When the
    evaluated matrix is invertible this uses the second-order Jacobi identity

        H_ab = det(A) * (tr(B_a) tr(B_b) - tr(B_a B_b)),   B_g = A^-1 E_g,

    reduced to sums over occurrence positions so the B_g are never formed.
    At singular points it falls back to the jet oracle.  In ``full`` mode the
    rows and columns of variables absent from P are identically zero.
    """
    if not P.is_square:
        raise UsageError("Hessian of det needs a square matrix")
    labels = _variable_list(P, variable_set)
    A = P.evaluate(point, field)
    Ainv = inverse_field(A, field)
    if Ainv is None:
        return labels, jet_hessian_at(P, point, field, labels)
    det = det_field(A, field)
    occ = P.occurrences()
    present = [g for g in labels if g in occ]
    if isinstance(field, PrimeField):
        H_small = _hessian_core_modp(Ainv, det, occ, present, field.p)
    else:
        H_small = _hessian_core_generic(Ainv, det, occ, present, field)
    # Scatter into the requested label order (zero rows for absent variables).
    index = {g: i for i, g in enumerate(present)}
    V = len(labels)
    H = [[field.zero] * V for _ in range(V)]
    for i, gi in enumerate(labels):
        ii = index.get(gi)
        if ii is None:
            continue
        row = H[i]
        for j, gj in enumerate(labels):
            jj = index.get(gj)
            if jj is not None:
                row[j] = H_small[ii][jj]
    return labels, H


def _hessian_core_modp(Ainv, det, occ, present, p):
    k = len(present)
    tr1 = []
    for g in present:
        tr1.append(sum(Ainv[c][r] for r, c in occ[g]) % p)
    H = [[0] * k for _ in range(k)]
    for i in range(k):
        occ_i = occ[present[i]]
        for j in range(i, k):
            occ_j = occ[present[j]]
            tr2 = 0
            for r, c in occ_i:
                for r2, c2 in occ_j:
                    tr2 += Ainv[c2][r] * Ainv[c][r2]
            val = det * (tr1[i] * tr1[j] - tr2) % p
            H[i][j] = val
            H[j][i] = val
    return H


def _hessian_core_generic(Ainv, det, occ, present, field):
    k = len(present)
    tr1 = []
    for g in present:
        s = field.zero
        for r, c in occ[g]:
            s = field.add(s, Ainv[c][r])
        tr1.append(s)
    H = [[field.zero] * k for _ in range(k)]
    for i in range(k):
        occ_i = occ[present[i]]
        for j in range(i, k):
            occ_j = occ[present[j]]
            tr2 = field.zero
            for r, c in occ_i:
                for r2, c2 in occ_j:
                    tr2 = field.add(tr2, field.mul(Ainv[c2][r], Ainv[c][r2]))
            val = field.mul(det, field.sub(field.mul(tr1[i], tr1[j]), tr2))
            H[i][j] = val
            H[j][i] = val
    return H


def jet_grad_det(P: SymbolicMatrix, point: dict, field) -> dict:
    """Gradient of det(P) read off first-order jet coefficients.

    Independent of the adjugate route: the matrix is evaluated over the base
    field extended by one infinitesimal per variable and the determinant is
    computed in that ring.
    """
    if not P.is_square:
        raise UsageError("gradient of det needs a square matrix")
    ring = JetRing(field, order=1)
    vars_ = P.variables()
    idx = {g: i for i, g in enumerate(vars_)}
    numeric = P.evaluate(point, field)
    jets = [
        [
            ring.constant(numeric[r][c])
            if g is None or g not in idx
            else ring.variable(numeric[r][c], idx[g])
            for c, g in enumerate(row)
        ]
        for r, row in enumerate(P.entries)
    ]
    det = det_in_ring(jets, ring)
    return {g: det.d1.get(idx[g], field.zero) for g in vars_}


def jet_hessian_entry(P: SymbolicMatrix, point: dict, field, alpha, beta):
    """One second partial of det(P) via two-infinitesimal second-order jets."""
    if not P.is_square:
        raise UsageError("Hessian of det needs a square matrix")
    ring = JetRing(field, order=2)
    numeric = P.evaluate(point, field)
    same = alpha == beta
    jets = []
    for r, row in enumerate(P.entries):
        jrow = []
        for c, g in enumerate(row):
            v = numeric[r][c]
            if g == alpha:
                jrow.append(ring.variable(v, 0))
            elif g == beta:
                jrow.append(ring.variable(v, 1))
            else:
                jrow.append(ring.constant(v))
        jets.append(jrow)
    det = det_in_ring(jets, ring)
    if same:
        coeff = det.d2.get((0, 0), field.zero)
        return field.add(coeff, coeff)
    return det.d2.get((0, 1), field.zero)


def jet_hessian_at(P: SymbolicMatrix, point: dict, field, labels: list) -> list:
    """Full second-derivative matrix by pairwise jet evaluation (fallback)."""
    occ = P.occurrences()
    V = len(labels)
    H = [[field.zero] * V for _ in range(V)]
    for i in range(V):
        if labels[i] not in occ:
            continue
        for j in range(i, V):
            if labels[j] not in occ:
                continue
            val = jet_hessian_entry(P, point, field, labels[i], labels[j])
            H[i][j] = val
            H[j][i] = val
    return H


def expand_det_poly(P: SymbolicMatrix, ambient: list) -> SparsePoly:
    """Symbolic determinant of a small pattern as a polynomial in the ambient
    coordinates (permutation expansion; guarded to tiny sizes)."""
    from itertools import permutations

    if not P.is_square:
        raise UsageError("determinant of a non-square matrix")
    k = P.nrows
    if k > 6:
        raise UsageError("symbolic expansion is limited to size <= 6")
    idx = {g: i for i, g in enumerate(ambient)}
    nv = len(ambient)
    terms: dict = {}
    for perm in permutations(range(k)):
        exps = [0] * nv
        ok = True
        for r, c in enumerate(perm):
            g = P.entries[r][c]
            if g is None:
                ok = False
                break
            exps[idx[g]] += 1
        if not ok:
            continue
        sign = _perm_sign(perm)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign
    return SparsePoly(nv, {g: Fraction(c) for g, c in terms.items() if c})


def _perm_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
