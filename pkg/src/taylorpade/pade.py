"""Construction of the symbolic Pade matrix and its column machinery.

The matrix of the linear map Q -> (QT restricted to monomials of degree
d+1..m) has rows labeled by exponents rho with d+1 <= |rho| <= m and columns
by exponents sigma with |sigma| <= e.  Every entry is either zero or the
single coefficient variable c_{rho-sigma}:

    entry(rho, sigma) = Var(rho - sigma)   if sigma <= rho componentwise,
                        Zero               otherwise.

Columns are grouped into blocks C_j with j = m - |sigma|: block C_j is the
matrix of multiplication by the degree-j homogeneous layer of T (together
with the degree j-1 layer hitting the lower row degrees).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import UsageError
from .fields import derive_seed
from .series import (
    Exponent,
    MonomialOrder,
    exp_sub,
    monomials_of_degree,
    monomials_upto,
)


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


@dataclass(frozen=True)
class PadeShape:
    rows: int
    cols: int

    @property
    def square(self) -> bool:
        return self.rows == self.cols


@dataclass(frozen=True)
class ColumnLabel:
    """Column of the Pade matrix: generating block j, position inside the
    block (0-based), and the domain monomial sigma."""

    block: int
    pos: int
    sigma: Exponent


class SymbolicMatrix:
    """Matrix whose entries are Zero or a single variable, encoded as
    ``None`` or the variable's exponent tuple.

    Instances are immutable by convention; evaluation and column operations
    return fresh data.  ``row_labels``/``col_labels``/``params`` are attached
    by the Pade constructor and may be ``None`` for ad-hoc patterns (the
    determinant-calculus layer only needs ``entries``).
    """

    def __init__(self, entries, row_labels=None, col_labels=None, params=None):
        self.entries = tuple(tuple(row) for row in entries)
        self.nrows = len(self.entries)
        self.ncols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != self.ncols:
                raise UsageError("ragged entry grid")
        self.row_labels = tuple(row_labels) if row_labels is not None else None
        self.col_labels = tuple(col_labels) if col_labels is not None else None
        self.params = params
        self._occ = None

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def occurrences(self) -> dict:
        """Map variable -> tuple of (row, col) positions where it appears."""
        if self._occ is None:
            occ: dict = {}
            for r, row in enumerate(self.entries):
                for c, g in enumerate(row):
                    if g is not None:
                        occ.setdefault(g, []).append((r, c))
            self._occ = {g: tuple(ps) for g, ps in occ.items()}
        return self._occ

    def variables(self) -> list:
        return sorted(self.occurrences())

    def evaluate(self, point: dict, field) -> list:
        """Numeric matrix over ``field``.

        Missing variables raise; the all-zero exponent defaults to 1 when
        absent (the affine chart convention c_0 = 1).
        """
        zero = field.zero
        out = []
        for row in self.entries:
            vals = []
            for g in row:
                if g is None:
                    vals.append(zero)
                elif g in point:
                    vals.append(point[g])
                elif not any(g):
                    vals.append(field.one)
                else:
                    raise UsageError(f"point does not assign variable {g}")
            out.append(vals)
        return out

    def incidence(self, g) -> list:
        """0/1 matrix E_g marking where variable ``g`` occurs."""
        pos = set(self.occurrences().get(g, ()))
        return [
            [1 if (r, c) in pos else 0 for c in range(self.ncols)]
            for r in range(self.nrows)
        ]

    def block_columns(self, j: int) -> list:
        """Column indices belonging to block C_j."""
        if self.col_labels is None:
            raise UsageError("matrix has no column block structure")
        cols = [i for i, lab in enumerate(self.col_labels) if lab.block == j]
        if not cols:
            raise UsageError(f"no block C_{j} in this matrix")
        return cols

    def blocks(self) -> list:
        """Block indices present, in column order (decreasing j)."""
        if self.col_labels is None:
            raise UsageError("matrix has no column block structure")
        seen = []
        for lab in self.col_labels:
            if lab.block not in seen:
                seen.append(lab.block)
        return seen

    def __repr__(self) -> str:
        return f"SymbolicMatrix({self.nrows}x{self.ncols})"


def pade_shape(n: int, d: int, e: int, m: int) -> PadeShape:
    """Row and column counts of the Pade matrix."""
    if n < 1 or d < 0 or e < 0:
        raise UsageError("need n >= 1, d >= 0, e >= 0")
    if m <= d:
        raise UsageError("need m > d (empty row window otherwise)")
    rows = _binom(m + n, n) - _binom(d + n, n)
    cols = _binom(e + n, n)
    return PadeShape(rows, cols)


def pade_matrix(
    n: int, d: int, e: int, m: int, within_increasing: bool = False
) -> SymbolicMatrix:
    """The symbolic Pade matrix for the given parameters.

    ``within_increasing`` flips the within-degree direction of the monomial
    orders (both row and column labels); the default reproduces the reference
    layout for (2,5,4,7).
    """
    pade_shape(n, d, e, m)  # validates
    domain = MonomialOrder(degree_increasing=True, lex_increasing=within_increasing)
    image = MonomialOrder(degree_increasing=False, lex_increasing=within_increasing)
    rows = image.sorted(
        g for deg in range(d + 1, m + 1) for g in monomials_of_degree(n, deg)
    )
    sigmas = domain.sorted(monomials_upto(n, e))
    col_labels = []
    block_pos: dict = {}
    for s in sigmas:
        j = m - sum(s)
        p = block_pos.get(j, 0)
        block_pos[j] = p + 1
        col_labels.append(ColumnLabel(block=j, pos=p, sigma=s))
    entries = [[exp_sub(rho, lab.sigma) for lab in col_labels] for rho in rows]
    return SymbolicMatrix(entries, rows, col_labels, params=(n, d, e, m))


def reduced_pade(P: SymbolicMatrix) -> SymbolicMatrix:
    """P with its first column (the constant monomial) deleted."""
    if P.ncols < 2:
        raise UsageError("reduced Pade matrix needs at least 2 columns")
    entries = [row[1:] for row in P.entries]
    col_labels = P.col_labels[1:] if P.col_labels is not None else None
    return SymbolicMatrix(entries, P.row_labels, col_labels, P.params)


def block_view(P: SymbolicMatrix, j: int) -> SymbolicMatrix:
    """The columns of P forming block C_j (domain monomials of degree m-j)."""
    cols = P.block_columns(j)
    entries = [[row[c] for c in cols] for row in P.entries]
    labels = [P.col_labels[c] for c in cols]
    return SymbolicMatrix(entries, P.row_labels, labels, P.params)


def lambda_shape(params) -> dict:
    """Expected component layout of a lambda assignment for square m=d+2
    matrices: block j -> list of exponents of degree d_j, in column order."""
    n, d, e, m = params
    base = d - e + 2
    order = MonomialOrder(degree_increasing=True, lex_increasing=False)
    out = {}
    for j in range(base + 1, m + 1):
        dj = j - base
        out[j] = order.sorted(monomials_of_degree(n, dj))
    return out


def random_lambda(P: SymbolicMatrix, field, seed) -> dict:
    """Random lambda assignment matching the block structure of P."""
    shape = lambda_shape(P.params)
    rng = random.Random(derive_seed("lambda", seed))
    return {j: {a: field.sample(rng) for a in alphas} for j, alphas in shape.items()}


def column_transform(P: SymbolicMatrix, lam: dict, point: dict, field) -> list:
    """Evaluate P at ``point`` and add, to each column of every block C_j with
    j above the base block, the shifted lambda-combination of the base block's
    columns.

    Column i (1-based) of C_j receives the base block multiplied by the
    padding vector (0_{i-1}, lambda^j, 0_{e-d_j-i+1}).  These are elementary
    column operations, so the determinant is unchanged.
    """
    if not P.is_square:
        raise UsageError("column_transform expects a square Pade matrix")
    if P.params is None or P.col_labels is None:
        raise UsageError("column_transform needs a matrix built by pade_matrix")
    n, d, e, m = P.params
    shape = lambda_shape(P.params)
    if set(lam) != set(shape):
        raise UsageError(f"lambda blocks {sorted(lam)} != expected {sorted(shape)}")
    for j, alphas in shape.items():
        if set(lam[j]) != set(alphas):
            raise UsageError(f"lambda^{j} components do not match degree d_j monomials")

    A = P.evaluate(point, field)
    base = d - e + 2
    base_cols = P.block_columns(base)
    for j, alphas in shape.items():
        coeffs = [lam[j][a] for a in alphas]  # in base-block column order
        for i, col in enumerate(P.block_columns(j)):  # i is 0-based
            for t, lam_c in enumerate(coeffs):
                src = base_cols[i + t]
                for r in range(P.nrows):
                    A[r][col] = field.add(A[r][col], field.mul(lam_c, A[r][src]))
    return A


def _m2_var(g: Exponent) -> str:
    if len(g) == 1:
        return f"c_{g[0]}"
    return "c_(" + ",".join(str(x) for x in g) + ")"


def export_m2(P: SymbolicMatrix) -> str:
    """Macaulay2 script reconstructing P entry by entry.

    The script declares one variable per ambient coefficient (all exponents of
    degree <= m), builds the matrix literally under the same ordering
    conventions, and ends with a random-evaluation determinant (or rank) check.
    Output is byte-stable for fixed inputs.
    """
    if P.params is None:
        raise UsageError("export needs a matrix built by pade_matrix")
    n, d, e, m = P.params
    ambient = monomials_upto(n, m)
    lines = [
        f"-- Pade matrix, parameters (n, d, e, m) = ({n}, {d}, {e}, {m})",
        "-- rows: monomials of degree d+1..m, degree decreasing;",
        "-- columns: monomials of degree 0..e, degree increasing;",
        "-- lex decreasing within each degree on both sides."
        if P.col_labels and not _within_increasing_of(P)
        else "-- lex increasing within each degree on both sides.",
        "L = {" + ", ".join(_m2_seq(g) for g in ambient) + "};",
        "C = QQ[apply(L, g -> c_g)];",
        "P = matrix {",
    ]
    body = []
    for row in P.entries:
        cells = ", ".join("0" if g is None else _m2_var(g) for g in row)
        body.append("  {" + cells + "}")
    lines.append(",\n".join(body))
    lines.append("};")
    lines.append(f"assert(numrows P == {P.nrows} and numcols P == {P.ncols});")
    lines.append("vals = apply(gens C, g -> g => random(QQ));")
    if P.is_square:
        lines.append("print det sub(P, vals);")
    else:
        lines.append("print rank sub(P, vals);")
    return "\n".join(lines) + "\n"


def _m2_seq(g: Exponent) -> str:
    if len(g) == 1:
        return str(g[0])
    return "(" + ",".join(str(x) for x in g) + ")"


def _within_increasing_of(P: SymbolicMatrix) -> bool:
    # Recover the within-degree convention from the first multi-column degree.
    if P.col_labels is not None:
        degs: dict = {}
        for lab in P.col_labels:
            degs.setdefault(sum(lab.sigma), []).append(lab.sigma)
        for group in degs.values():
            if len(group) > 1:
                return group[0] < group[-1]
    return False
