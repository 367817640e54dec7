"""Relation matrix of determinant gradients and vanishing-Hessian certificates.

For the square two-variable family with m = d+2, adding shifted multiples of
the base column block to the higher blocks leaves det(P) unchanged; reading
the derivative of that invariance in the auxiliary coefficients yields linear
relations sum_b c_b f^(j)_{a+b} = 0, where f^(j)_g is the cofactor sum of
det(P) over the occurrences of c_g inside block C_j.  In this family a
variable occurs in two adjacent blocks, so the block-restricted sums f^(j)_g
are the objects the identity genuinely constrains (their sum over blocks is
the full partial derivative f_g).  The identity M.c = 0 holds at every point
and bounds rk(M) < 2d-2e+5.

Certificates report randomized polynomial identity tests: a nonzero value
modulo any prime certifies a nonzero polynomial, while an all-zero run leaves
a quantified Schwartz-Zippel failure probability.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field

from .detcalc import (
    block_grad_det_at,
    det_field,
    det_modp,
    hessian_det_at,
    inverse_field,
    rank_at,
)
from .errors import DomainError, UnsupportedParametersError, UsageError
from .fields import PRIMES_62, PrimeField, derive_seed, point_hash, random_point
from .pade import pade_matrix
from .series import MonomialOrder, SparsePoly, exp_add, monomials_of_degree
from .variety import TaylorParams, nondefective_hypersurface_check

VANISHES = "vanishes-probabilistic"
NONZERO = "nonzero-certified"

_WITHIN_DEC = MonomialOrder(degree_increasing=True, lex_increasing=False)


def _require_relation_params(params: TaylorParams):
    if params.n != 2:
        raise UnsupportedParametersError("relation matrix is built for n = 2 only")
    if params.m != params.d + 2:
        raise UnsupportedParametersError("relation matrix needs m = d + 2")
    if not params.is_square:
        raise UnsupportedParametersError("relation matrix needs a square Pade matrix")


def relation_column_labels(params: TaylorParams) -> list:
    """Exponents b with |b| in {d-e+2, d-e+1}: higher degree block first,
    lex decreasing within each degree."""
    d, e = params.d, params.e
    out = list(monomials_of_degree(2, d - e + 2))
    out.extend(monomials_of_degree(2, d - e + 1))
    return out


@dataclass(frozen=True)
class RelationMatrix:
    """Stacked blocks M_j with entries f_{a+b}, j = d+2 down to d-e+3."""

    params: TaylorParams
    row_labels: tuple  # (j, alpha) pairs
    col_labels: tuple  # beta exponents
    rows: tuple  # numeric entries

    @property
    def shape(self):
        return (len(self.rows), len(self.col_labels))

    def block(self, j: int) -> list:
        return [row for (jj, _), row in zip(self.row_labels, self.rows) if jj == j]


def build_M(params: TaylorParams, block_grad: dict, field) -> RelationMatrix:
    """Relation matrix from the per-block gradient of det(P).

    ``block_grad`` maps (block j, exponent g) to the cofactor sum of the
    occurrences of c_g inside block C_j (see ``block_grad_det_at``).  Row
    (j, alpha) holds the values f^(j)_{alpha+beta} over the column labels
    beta; every row annihilates the coefficient vector c.
    """
    _require_relation_params(params)
    d, e, m = params.d, params.e, params.m
    base = d - e + 2
    cols = relation_column_labels(params)
    row_labels = []
    rows = []
    for j in range(m, base, -1):
        dj = j - base
        for alpha in sorted(monomials_of_degree(2, dj), key=_WITHIN_DEC.key):
            row = []
            for beta in cols:
                g = (j, exp_add(alpha, beta))
                if g not in block_grad:
                    raise UsageError(f"block gradient is missing {g}")
                row.append(block_grad[g])
            row_labels.append((j, alpha))
            rows.append(tuple(row))
    M = RelationMatrix(params, tuple(row_labels), tuple(cols), tuple(rows))
    expect_rows = (e + 1) * (e + 2) // 2 - 1
    expect_cols = 2 * d - 2 * e + 5
    assert M.shape == (expect_rows, expect_cols)
    return M


def relation_residual(M: RelationMatrix, point: dict, field) -> list:
    """M.c with c the coefficient vector read off the point."""
    c = [point[b] for b in M.col_labels]
    out = []
    for row in M.rows:
        s = field.zero
        for x, y in zip(row, c):
            s = field.add(s, field.mul(x, y))
        out.append(s)
    return out


def verify_relations(params: TaylorParams, point: dict, field) -> list:
    """Residual M.c at a point; exactly zero for every point (an identity)."""
    _require_relation_params(params)
    P = pade_matrix(*params.astuple())
    bg = block_grad_det_at(P, point, field)
    M = build_M(params, bg, field)
    return relation_residual(M, point, field)


def rank_M_at(params: TaylorParams, point: dict, field) -> int:
    P = pade_matrix(*params.astuple())
    bg = block_grad_det_at(P, point, field)
    M = build_M(params, bg, field)
    return rank_at([list(r) for r in M.rows], field)


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    prime: int
    point_digest: str
    value: int
    corank: int | None = None

    def to_dict(self):
        d = {
            "index": self.index,
            "seed": self.seed,
            "prime": self.prime,
            "point_digest": self.point_digest,
            "value": self.value,
        }
        if self.corank is not None:
            d["corank"] = self.corank
        return d


@dataclass(frozen=True)
class Certificate:
    """Verdict of a randomized vanishing test with its error accounting.

    ``error_bound`` is the probability that a nonzero polynomial of the given
    degree bound evaluates to zero at every recorded point: the product of
    degree_bound/p over the all-zero trials.  It applies to the
    vanishes-probabilistic verdict; a nonzero-certified verdict is exact.
    """

    target: str
    verdict: str
    degree_bound: int
    trials: tuple
    error_bound: float | None
    error_bound_log10: float | None
    notes: tuple = dc_field(default=())

    def to_dict(self):
        return {
            "target": self.target,
            "verdict": self.verdict,
            "degree_bound": self.degree_bound,
            "trials": [t.to_dict() for t in self.trials],
            "error_bound": self.error_bound,
            "error_bound_log10": self.error_bound_log10,
            "notes": list(self.notes),
        }


def _finish_certificate(target, degree_bound, records, primes_used, notes=()):
    all_zero = all(t.value == 0 for t in records)
    if not records:
        raise UsageError("need at least one trial")
    if all_zero:
        verdict = VANISHES
        log10 = sum(math.log10(degree_bound) - math.log10(p) for p in primes_used)
        log10 = min(log10, 0.0)
        bound = 10.0 ** log10 if log10 > -320 else 0.0
        if bound > 1.0:
            bound = 1.0
    else:
        verdict = NONZERO
        bound = None
        log10 = None
    return Certificate(
        target=target,
        verdict=verdict,
        degree_bound=degree_bound,
        trials=tuple(records),
        error_bound=bound,
        error_bound_log10=log10,
        notes=tuple(notes),
    )


def _trial_field(ctx, t: int) -> PrimeField:
    if ctx is not None:
        return ctx
    return PrimeField(PRIMES_62[t % len(PRIMES_62)])


def certify_hessian_pade(
    params: TaylorParams,
    variable_set: str = "full",
    trials: int = 20,
    seed=0,
    ctx: PrimeField | None = None,
    gate_trials: int = 8,
) -> Certificate:
    """Probabilistic test of det(Hessian of det(P)) == 0.

    Refuses parameters that do not pass the non-defective-hypersurface gate
    (there the determinant may be identically zero and the question is moot).
    Each trial samples a fresh point over a rotating 62-bit prime, resampling
    up to 8 times if the evaluated Pade matrix happens to be singular, and
    records det(H) together with the corank of H.
    """
    check = nondefective_hypersurface_check(
        params, trials=gate_trials, ctx=ctx, seed=derive_seed("gate", seed)
    )
    if not check.is_nondefective_hypersurface:
        raise DomainError(
            f"refusing Hessian certificate for {params.astuple()}: "
            f"verdict {check.verdict!r} "
            f"(det nonzero in {check.det_nonzero_count}/{check.det_trials} trials, "
            f"dimension {check.actual_dim} vs expected {check.expected_dim})"
        )
    P = pade_matrix(*params.astuple())
    variables = P.variables()
    records = []
    primes_used = []
    degree_bound = None
    for t in range(trials):
        fld = _trial_field(ctx, t)
        trial_seed = derive_seed("hessian", seed, t)
        point = random_point(variables, fld, trial_seed)
        for retry in range(8):
            if inverse_field(P.evaluate(point, fld), fld) is not None:
                break
            trial_seed = derive_seed("hessian", seed, t, "resample", retry)
            point = random_point(variables, fld, trial_seed)
        labels, H = hessian_det_at(P, point, fld, variable_set)
        if degree_bound is None:
            degree_bound = len(labels) * (P.nrows - 2)
        value = det_modp(H, fld.p) if isinstance(fld, PrimeField) else det_field(H, fld)
        corank = len(labels) - rank_at(H, fld)
        records.append(
            TrialRecord(
                index=t,
                seed=trial_seed,
                prime=fld.p,
                point_digest=point_hash(point),
                value=int(value),
                corank=corank,
            )
        )
        primes_used.append(fld.p)
    target = f"hessian-det[pade{params.astuple()}, {variable_set}]"
    return _finish_certificate(target, degree_bound, records, primes_used)


def certify_hessian_poly(
    f: SparsePoly, trials: int = 20, seed=0, ctx: PrimeField | None = None
) -> Certificate:
    """Probabilistic test of det(Hessian of f) == 0 for an explicit polynomial."""
    if not f.is_homogeneous() or f.degree() < 2:
        raise UsageError("need a homogeneous polynomial of degree >= 2")
    V = f.nvars
    second = [[None] * V for _ in range(V)]
    for i in range(V):
        fi = f.diff(i)
        for j in range(i, V):
            second[i][j] = second[j][i] = fi.diff(j)
    degree_bound = V * (f.degree() - 2)
    records = []
    primes_used = []
    for t in range(trials):
        fld = _trial_field(ctx, t)
        trial_seed = derive_seed("poly-hessian", seed, t)
        rng = random.Random(trial_seed)
        values = [fld.sample(rng) for _ in range(V)]
        H = [[second[i][j].eval(fld, values) for j in range(V)] for i in range(V)]
        value = det_modp(H, fld.p)
        corank = V - rank_at(H, fld)
        records.append(
            TrialRecord(
                index=t,
                seed=trial_seed,
                prime=fld.p,
                point_digest=point_hash(dict(enumerate(values))),
                value=int(value),
                corank=corank,
            )
        )
        primes_used.append(fld.p)
    target = f"hessian-det[poly, {V} vars, degree {f.degree()}]"
    return _finish_certificate(target, degree_bound, records, primes_used)


def polar_image_rank(
    target, variable_set: str = "essential", points: int = 3, seed=0, ctx=None
) -> int:
    """Local rank of the differential of the polar map w -> (f_g)(w).

    That differential is the Hessian matrix of f, so this is the maximum
    Hessian rank over the sampled points, a certified lower bound for the
    generic rank.
    """
    if points < 1:
        raise UsageError("need at least one point")
    best = 0
    if isinstance(target, SparsePoly):
        V = target.nvars
        second = [[target.diff(i).diff(j) for j in range(V)] for i in range(V)]
        for t in range(points):
            fld = _trial_field(ctx, t)
            rng = random.Random(derive_seed("polar", seed, t))
            values = [fld.sample(rng) for _ in range(V)]
            H = [[second[i][j].eval(fld, values) for j in range(V)] for i in range(V)]
            best = max(best, rank_at(H, fld))
        return best
    params: TaylorParams = target
    P = pade_matrix(*params.astuple())
    variables = P.variables()
    for t in range(points):
        fld = _trial_field(ctx, t)
        point = random_point(variables, fld, derive_seed("polar", seed, t))
        _, H = hessian_det_at(P, point, fld, variable_set)
        best = max(best, rank_at(H, fld))
    return best
