"""Exact rational linear programming with machine-checkable certificates.

Programs have free variables::

    minimize  c.x   subject to   a_i.x >= b_i,   e_j.x = d_j

Dimensions are small (a handful of variables) while the number of rows can be
larger, so the solver runs the primal simplex with Bland's rule on the dual
program ``max b.y + d.mu  s.t.  A^T y + E^T mu = c, y >= 0``, which is in
standard form with one equality per primal variable.  Primal points, rays and
Farkas certificates are read off the final tableau.

Every outcome carries a certificate that :func:`verify` re-checks with exact
arithmetic.  Setting ``CHECK_CERTIFICATES`` (or the environment variable
``SETVALUED_CHECK_LP=1``) makes :func:`solve` verify each result before
returning it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .extreal import MINUS_INF, PLUS_INF, ExtReal, dot

CHECK_CERTIFICATES = os.environ.get("SETVALUED_CHECK_LP") == "1"

_ZERO = Fraction(0)
_ONE = Fraction(1)

Row = tuple  # (tuple[Fraction, ...], Fraction)


class LPError(ValueError):
    pass


class CertificateError(AssertionError):
    pass


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple
    ineq: tuple = ()
    eq: tuple = ()

    def __post_init__(self):
        n = len(self.objective)
        if n == 0:
            raise LPError("a linear program needs at least one variable")
        object.__setattr__(self, "objective", tuple(Fraction(v) for v in self.objective))
        object.__setattr__(self, "ineq", _norm_rows(self.ineq, n))
        object.__setattr__(self, "eq", _norm_rows(self.eq, n))

    @property
    def dim(self) -> int:
        return len(self.objective)

    def with_objective(self, c: Sequence) -> "LinearProgram":
        return LinearProgram(tuple(c), self.ineq, self.eq)

    def with_eq(self, a: Sequence, d) -> "LinearProgram":
        return LinearProgram(self.objective, self.ineq, self.eq + ((tuple(a), d),))


def _norm_rows(rows, n):
    out = []
    for a, b in rows:
        a = tuple(a)
        if len(a) != n:
            raise LPError(f"row has dimension {len(a)}, program has {n}")
        out.append((tuple(x if isinstance(x, Fraction) else Fraction(x) for x in a),
                    b if isinstance(b, Fraction) else Fraction(b)))
    return tuple(out)


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    x: tuple
    y: tuple   # multipliers of inequality rows, >= 0
    mu: tuple  # multipliers of equality rows, free


@dataclass(frozen=True)
class Infeasible:
    y: tuple
    mu: tuple


@dataclass(frozen=True)
class Unbounded:
    x: tuple    # a feasible point
    ray: tuple  # recession direction with c.ray < 0


# --------------------------------------------------------------------------
# standard-form simplex:  min g.w  s.t.  M w = h,  w >= 0


class _Tableau:
    """Dense tableau over ``[real columns | artificial columns | rhs]``."""

    def __init__(self, M, h):
        self.m = len(M)
        self.n = len(M[0]) if M else 0
        self.sign = [1] * self.m
        rows = []
        for i in range(self.m):
            row = list(M[i])
            rhs = h[i]
            if rhs < 0:
                self.sign[i] = -1
                row = [-v for v in row]
                rhs = -rhs
            art = [_ZERO] * self.m
            art[i] = _ONE
            rows.append(row + art + [rhs])
        self.T = rows
        self.basis = [self.n + i for i in range(self.m)]
        self.width = self.n + self.m

    def pivot(self, r, s):
        T = self.T
        prow = T[r]
        p = prow[s]
        if p != 1:
            inv = 1 / p
            prow = [v * inv if v else v for v in prow]
            T[r] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[s]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = s

    def reduced_costs(self, cost):
        """``cost_j - cost_B . T[:, j]`` for every column (and ``-cost_B . rhs``)."""
        rc = list(cost) + [_ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.T[i]
                for j, v in enumerate(row):
                    if v:
                        rc[j] -= cb * v
        return rc

    def run(self, cost, allowed):
        """Bland's-rule primal simplex.  Returns ('optimal', rc) or ('unbounded', s)."""
        rc = self.reduced_costs(cost)
        while True:
            s = -1
            for j in range(allowed):
                if rc[j] < 0:
                    s = j
                    break
            if s < 0:
                return "optimal", rc
            best = None
            r = -1
            for i in range(self.m):
                a = self.T[i][s]
                if a > 0:
                    ratio = self.T[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best:
                        best, r = key, i
            if r < 0:
                return "unbounded", s
            self.pivot(r, s)
            f = rc[s]
            prow = self.T[r]
            for j, v in enumerate(prow):
                if v:
                    rc[j] -= f * v

    def duals(self, rc, art_cost):
        """Simplex multipliers in the original (unflipped) row signs."""
        out = []
        for i in range(self.m):
            pi = art_cost - rc[self.n + i]
            out.append(pi * self.sign[i])
        return out

    def drive_out_artificials(self):
        for i in range(self.m):
            if self.basis[i] >= self.n:
                row = self.T[i]
                for j in range(self.n):
                    if row[j]:
                        self.pivot(i, j)
                        break

    def primal(self):
        w = [_ZERO] * self.width
        for i, b in enumerate(self.basis):
            w[b] = self.T[i][-1]
        return w[: self.n]


def _standard_form(M, h, g):
    """Solve ``min g.w, M w = h, w >= 0``.

    Returns one of
      ('optimal', w, x) with x the multipliers (M^T x <= g, h.x = g.w),
      ('infeasible', u) with M^T u <= 0 and h.u > 0,
      ('unbounded', w, d) with d >= 0, M d = 0, g.d < 0.
    """
    tab = _Tableau(M, h)
    n, m = tab.n, tab.m
    phase1 = [_ZERO] * n + [_ONE] * m
    status, rc = tab.run(phase1, n)
    if rc[-1] != 0:
        # phase-one optimum -rc[-1] > 0
        return ("infeasible", tab.duals(rc, _ONE))
    tab.drive_out_artificials()
    phase2 = list(g) + [_ZERO] * m
    status, info = tab.run(phase2, n)
    if status == "optimal":
        return ("optimal", tab.primal(), tab.duals(info, _ZERO))
    s = info
    d = [_ZERO] * tab.width
    d[s] = _ONE
    for i, b in enumerate(tab.basis):
        d[b] = -tab.T[i][s]
    return ("unbounded", tab.primal(), d[:n])


def _dual_data(lp: LinearProgram, c):
    n = lp.dim
    cols = [a for a, _ in lp.ineq]
    cost = [b for _, b in lp.ineq]
    for e, d in lp.eq:
        cols.append(e)
        cost.append(d)
    for e, d in lp.eq:
        cols.append(tuple(-v for v in e))
        cost.append(-d)
    M = [[col[k] for col in cols] for k in range(n)]
    return M, list(c), cost


def _split(lp, w):
    k = len(lp.ineq)
    q = len(lp.eq)
    y = tuple(w[:k])
    mu = tuple(w[k + j] - w[k + q + j] for j in range(q))
    return y, mu


def _solve(lp: LinearProgram):
    M, h, cost = _dual_data(lp, lp.objective)
    g = [-v for v in cost]
    res = _standard_form(M, h, g)
    if res[0] == "optimal":
        _, w, pi = res
        y, mu = _split(lp, w)
        x = tuple(-v for v in pi)
        value = dot(lp.objective, x)
        return Optimal(value, x, y, mu)
    if res[0] == "unbounded":
        _, _, d = res
        y, mu = _split(lp, d)
        return Infeasible(y, mu)
    # dual infeasible: primal is unbounded or infeasible
    ray = tuple(-v for v in res[1])
    feas = _standard_form(M, [_ZERO] * lp.dim, g)
    if feas[0] == "optimal":
        x = tuple(-v for v in feas[2])
        return Unbounded(x, ray)
    y, mu = _split(lp, feas[2])
    return Infeasible(y, mu)


def solve(lp: LinearProgram):
    out = _solve(lp)
    if CHECK_CERTIFICATES:
        verify(lp, out)
    return out


def verify(lp: LinearProgram, out) -> None:
    """Re-check a certificate exactly; raise :class:`CertificateError` if it fails."""
    n = lp.dim

    def combo(y, mu):
        v = [_ZERO] * n
        for yi, (a, _) in zip(y, lp.ineq):
            if yi:
                for k in range(n):
                    v[k] += yi * a[k]
        for mj, (e, _) in zip(mu, lp.eq):
            if mj:
                for k in range(n):
                    v[k] += mj * e[k]
        return v

    def rhs(y, mu):
        return sum((yi * b for yi, (_, b) in zip(y, lp.ineq)), _ZERO) + \
            sum((mj * d for mj, (_, d) in zip(mu, lp.eq)), _ZERO)

    def feasible(x):
        return all(dot(a, x) >= b for a, b in lp.ineq) and all(dot(e, x) == d for e, d in lp.eq)

    if isinstance(out, Optimal):
        if not feasible(out.x):
            raise CertificateError("optimal point is infeasible")
        if any(v < 0 for v in out.y):
            raise CertificateError("negative inequality multiplier")
        if combo(out.y, out.mu) != list(lp.objective):
            raise CertificateError("multipliers do not reproduce the objective")
        if rhs(out.y, out.mu) != out.value or dot(lp.objective, out.x) != out.value:
            raise CertificateError("duality gap")
    elif isinstance(out, Infeasible):
        if any(v < 0 for v in out.y):
            raise CertificateError("negative Farkas multiplier")
        if any(combo(out.y, out.mu)):
            raise CertificateError("Farkas combination is not zero")
        if rhs(out.y, out.mu) <= 0:
            raise CertificateError("Farkas right-hand side is not positive")
    elif isinstance(out, Unbounded):
        if not feasible(out.x):
            raise CertificateError("unbounded: base point infeasible")
        r = out.ray
        if not all(dot(a, r) >= 0 for a, _ in lp.ineq) or not all(dot(e, r) == 0 for e, _ in lp.eq):
            raise CertificateError("unbounded: ray leaves the recession cone")
        if dot(lp.objective, r) >= 0:
            raise CertificateError("unbounded: ray does not improve the objective")
    else:
        raise CertificateError(f"unknown outcome {out!r}")


# --------------------------------------------------------------------------
# convenience wrappers


def minimize(c, ineq=(), eq=()) -> ExtReal:
    """Optimal value as an extended real (``+inf`` if infeasible)."""
    out = solve(LinearProgram(tuple(c), tuple(ineq), tuple(eq)))
    if isinstance(out, Optimal):
        return ExtReal(out.value)
    if isinstance(out, Unbounded):
        return MINUS_INF
    return PLUS_INF


def maximize(c, ineq=(), eq=()) -> ExtReal:
    return -minimize(tuple(-v for v in c), ineq, eq)


def feasible_point(dim: int, ineq=(), eq=()):
    """A feasible point, or ``None``."""
    out = solve(LinearProgram((_ZERO,) * dim, tuple(ineq), tuple(eq)))
    if isinstance(out, Infeasible):
        return None
    return out.x


def optimize_over_optimal_face(lp1: LinearProgram, c2) -> ExtReal:
    """``sup c2.x`` over the set of optimal solutions of ``lp1``.

    ``lp1`` must be feasible and bounded; the optimal face is described by
    appending ``objective.x = v*`` to its constraints.
    """
    out = solve(lp1)
    if not isinstance(out, Optimal):
        raise LPError(f"first-stage program is not solvable to optimality: {type(out).__name__}")
    lp2 = LinearProgram(tuple(-Fraction(v) for v in c2), lp1.ineq,
                        lp1.eq + ((lp1.objective, out.value),))
    return -minimize(lp2.objective, lp2.ineq, lp2.eq)
