"""Randomized property checks shared by the module tests and the acceptance suite.

Each ``check_*`` function takes one instance and returns a list of
``(law, message)`` failures, plus bookkeeping of which laws were exercised
non-vacuously.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from setvalued import analysis as an
from setvalued import instances as inst
from setvalued import lattice as lat
from setvalued import lp
from setvalued import oracles as orc
from setvalued import polyhedron as ph
from setvalued import setmap as sm
from setvalued.extreal import MINUS_INF, PLUS_INF, ExtReal, dot, inf_residuate
from setvalued.lattice import HalfSpaceValue, UpperSet
from setvalued.polyhedron import HPoly

ZERO = Fraction(0)


@dataclass
class Tally:
    """Failures and per-law counts of non-vacuous checks.

    ``seed`` and ``instance`` describe the instance being checked; both are
    attached to every failure so it can be written out as a replay file.
    """

    failures: list = field(default_factory=list)
    exercised: Counter = field(default_factory=Counter)
    seed: int | None = None
    instance: dict = field(default_factory=dict)

    def start(self, seed: int, **instance):
        self.seed = seed
        self.instance = instance

    def check(self, law: str, ok: bool, detail=""):
        self.exercised[law] += 1
        if not ok:
            self.failures.append((law, detail, self.seed, self.instance))

    def failed_laws(self) -> Counter:
        return Counter(f[0] for f in self.failures)

    def summary(self) -> str:
        bad = self.failed_laws()
        parts = [f"{law}:{n}" + (f"(FAIL {bad[law]})" if bad[law] else "") for law, n in sorted(self.exercised.items())]
        return " ".join(parts)

    def save_replays(self, name: str, directory, limit: int = 25) -> list:
        paths = []
        for law, detail, seed, instance in self.failures[:limit]:
            rep = orc.OracleReport(f"{name}-{law}", seed, _jsonable(instance), "law holds", _jsonable(detail), False)
            paths.append(rep.save(directory))
        return paths


def _jsonable(v):
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, ExtReal):
        return str(v)
    return v if isinstance(v, (int, str, bool, type(None))) else repr(v)


# --------------------------------------------------------------------------
# lattice laws


def hclass(X: UpperSet, zs) -> str:
    """``Z``, ``E`` or ``P`` according to ``X ⊕ H(z*)``."""
    h = lat.oplus_halfspace(X, zs)
    return "Z" if h.is_ambient else "E" if h.is_empty else "P"


def lattice_tuple(rng: random.Random):
    d = rng.randint(1, 4)
    C = inst.random_cone(rng, d)
    zs = inst.random_zstar(rng, C)
    A, B, D = (inst.random_upper_set(rng, C) for _ in range(3))
    s = Fraction(rng.randint(0, 4), 4)
    return C, zs, A, B, D, s


def _strict(big: UpperSet, small: UpperSet) -> bool:
    return lat.superset(big, small) and not lat.superset(small, big)


def check_lattice_laws(t: Tally, C, zs, A, B, D, s):
    zr = lambda X, Y: lat.z_residuate(X, Y, zs)  # noqa: E731
    sup, eq, plus = lat.superset, lat.equal, lat.oplus
    H = lat.halfspace(zs, C)
    a, b, d = hclass(A, zs), hclass(B, zs), hclass(D, zs)
    ctx = (a, b, d)

    t.check("adjunction", sup(A, plus(B, D)) == sup(lat.residuate(A, B), D), ctx)
    t.check("residuate=oracle", eq(lat.residuate(A, B), orc.residuate_oracle(A, B)), ctx)
    t.check("sum-distributes-over-inf", eq(plus(B, lat.inf_family([A, D], C)), lat.inf_family([plus(B, A), plus(B, D)], C)), ctx)
    t.check("sum-distributes-over-empty-inf", eq(plus(B, lat.inf_family([], C)), lat.inf_family([], C)))
    t.check("z-residuate-definition", eq(zr(A, B), lat.residuate(plus(A, H), B)), ctx)
    AH, BH = plus(A, H), plus(B, H)
    t.check("z-residuate-absorbs-H", eq(zr(A, B), zr(AH, B)) and eq(zr(A, B), zr(A, BH)) and eq(zr(A, B), zr(AH, BH)), ctx)
    t.check("distributivity", eq(lat.scale(s + 1 - s, A), plus(lat.scale(s, A), lat.scale(1 - s, A))), ctx)

    t.check("halfspace-order-reversal", sup(AH, BH) == sup(zr(H, B), zr(H, A)), ctx)
    r = zr(A, B)
    t.check("z-residual-proper-iff", r.is_proper == (a == "P" and b == "P"), ctx)

    # monotonicity on the guaranteed pair A ⊇ A ∩ D, and on (A, B) when comparable
    AD = lat.sup_family([A, D], C)
    for big, small in ((A, AD), (A, B)):
        if sup(big, small):
            t.check("z-residual-monotone", sup(zr(big, D), zr(small, D)) and sup(zr(D, small), zr(D, big)), ctx)
    t.check("self-residual", eq(zr(A, A), H if a == "P" else UpperSet.ambient(C)), ctx)
    lhs = zr(plus(lat.scale(s, A), lat.scale(1 - s, B)), D)
    rhs = plus(lat.scale(s, zr(A, D)), lat.scale(1 - s, zr(B, D)))
    t.check("residual-of-convex-combination", sup(lhs, rhs), ctx)

    big, small = zr(plus(A, B), B), AH
    t.check("sum-minus-summand-inclusion", sup(big, small), ctx)
    cond = (A.is_empty and B.is_empty) or (a == "P" and b in "ZE")
    t.check("sum-minus-summand-strict-iff", _strict(big, small) == cond, ctx)
    t.exercised["sum-minus-summand-strict-cases"] += cond

    big, small = AH, plus(zr(A, B), B)
    t.check("residual-plus-subtrahend-inclusion", sup(big, small), ctx)
    cond = (not A.is_empty and B.is_empty) or (a == "P" and b == "Z")
    t.check("residual-plus-subtrahend-strict-iff", _strict(big, small) == cond, ctx)
    t.exercised["residual-plus-subtrahend-strict-cases"] += cond

    big, small = zr(plus(A, B), D), plus(zr(A, D), B)
    t.check("residual-absorbs-summand-inclusion", sup(big, small), ctx)
    cond = (B.is_empty and D.is_empty) or (b == "Z" and d == "Z" and a == "P")
    t.check("residual-absorbs-summand-strict-iff", _strict(big, small) == cond, ctx)
    t.exercised["residual-absorbs-summand-strict-cases"] += cond

    for X, Y in ((A, B), (A, A), (A, plus(A, B))):
        if sup(H, zr(X, Y)):
            t.check("residual-below-H", sup(plus(Y, H), X), ctx)

    big, small = zr(zr(A, B), A), zr(H, B)
    t.check("double-residual-inclusion", sup(big, small), ctx)
    printed = (b == "Z" and a in "ZE") or (b != "E" and a == "Z")
    t.check("double-residual-strict-iff", _strict(big, small) == printed, ctx)
    t.exercised["double-residual-strict-cases"] += printed


def double_residual_strictness_holds(C, zs, A, B) -> bool:
    """Whether the double residual is strictly larger exactly when ``B ⊕ H(z*) != ∅`` and ``A ⊕ H(z*)`` is ``Z`` or ``∅``."""
    H = lat.halfspace(zs, C)
    big, small = lat.z_residuate(lat.z_residuate(A, B, zs), A, zs), lat.z_residuate(H, B, zs)
    a, b = hclass(A, zs), hclass(B, zs)
    return _strict(big, small) == (b != "E" and a in "ZE")


# --------------------------------------------------------------------------
# derivatives


@dataclass
class DerivInstance:
    f: sm.SetValuedMap
    zs: tuple
    x0: tuple
    x: tuple
    x2: tuple


def deriv_instance(rng: random.Random) -> DerivInstance:
    m = inst.random_map(rng)
    f, x0 = m.f, m.x0
    if rng.random() < 0.15:
        shifted = tuple(v + rng.choice((-5, 5)) for v in x0)
        if not sm.in_domain(f, shifted):
            x0 = shifted
    zs = m.zstar if rng.random() < 0.8 else inst.random_zstar(rng, f.cone)
    return DerivInstance(f, zs, x0, inst.random_direction(rng, f.nx), inst.random_direction(rng, f.nx))


def _upper(h: HalfSpaceValue, C) -> UpperSet:
    return h.to_upper(C)


def check_derivative(t: Tally, I: DerivInstance):
    f, zs, x0, x, x2 = I.f, I.zs, I.x0, I.x, I.x2
    C = f.cone
    D = lambda v: sm.dir_derivative(f, zs, x0, v)  # noqa: E731
    d = D(x)
    try:
        q, levels = orc.derivative_oracle(f, zs, x0, x)
        t.check("face=oracle", q.level == d.level, (d.level, levels))
        t.check("quotient-monotone", all(a <= b for a, b in zip(levels, levels[1:])), levels)
    except orc.OracleFailure as exc:
        t.check("face=oracle", False, str(exc))
    # monotonicity for arbitrary 0 < t <= s, and the two companion inclusions
    s_big, t_small = Fraction(1, 2), Fraction(1, 7)
    g = lambda tt, v: sm.difference_quotient(f, zs, x0, v, tt).to_upper(C)  # noqa: E731
    H = lat.halfspace(zs, C)
    mx = tuple(-v for v in x)
    t.check("quotient-monotone-in-t", lat.superset(g(t_small, x), g(s_big, x)))
    t.check("negated-quotient-antitone", lat.superset(lat.z_residuate(H, g(s_big, mx), zs), lat.z_residuate(H, g(t_small, mx), zs)))
    if hclass(sm.evaluate(f, x0), zs) == "P":
        t.check("quotient-above-negated", lat.superset(lat.z_residuate(H, g(t_small, mx), zs), g(t_small, x)))

    for s in (Fraction(2), Fraction(1, 3)):
        sx = tuple(s * v for v in x)
        t.check("homogeneity", D(sx).level == d.level.scale(s), s)
    both = tuple(a + b for a, b in zip(x, x2))
    t.check("superadditivity", lat.superset(_upper(D(both), C), lat.oplus(_upper(d, C), _upper(D(x2), C))))

    fx0 = sm.evaluate(f, x0)
    zero = (ZERO,) * f.nx
    expected0 = lat.halfspace(zs, C) if hclass(fx0, zs) == "P" else UpperSet.ambient(C)
    t.check("value-at-0", lat.equal(_upper(D(zero), C), expected0), hclass(fx0, zs))
    if not sm.in_domain(f, x0):
        t.check("outside-domain-is-Z", d.is_ambient)
    else:
        if any(dot(a, x0) == b for a, b in f.domain.rows):
            t.exercised["x0-on-boundary"] += 1
        T = ph.tangent_cone(f.domain, x0)
        t.check("domain=cone(dom f - x0)", ph.poly_equal(sm.derivative_domain(f, zs, x0), T))
        for v in (x, x2, both):
            t.check("domain-membership", (not D(v).is_empty) == ph.contains_point(T, v))


# --------------------------------------------------------------------------
# max-formula


def check_max_formula(t: Tally, rng: random.Random, f, zs, x0, ndirs: int = 20):
    S = sm.subdifferential(f, zs, x0)
    t.check("subdiff-nonempty", not S.is_empty())
    if S.is_empty():
        return
    P = S.hpoly
    G = P.generators
    t.check("subdiff-bounded", not G.rays and not G.lines)
    for k in range(ndirs):
        x = inst.random_direction(rng, f.nx) if k else (ZERO,) * f.nx
        d = sm.dir_derivative(f, zs, x0, x)
        sigma = ph.support(P, x)
        t.check("level=-support", d.level == -sigma, (x, d.level, sigma))
        t.check("level=-support(lifted)", d.level == -S.support(x))
        if d.level.is_finite:
            best = max(G.vertices, key=lambda v: dot(v, x))
            t.check("vertex-attains", lat.S_value(best, zs, x, f.cone).level == d.level)
            u = S.attaining_point(x)
            t.check("witness-attains", S.contains(u) and lat.S_value(u, zs, x, f.cone).level == d.level)
            inter = min(lat.S_value(v, zs, x, f.cone).level for v in G.vertices)
            t.check("max-formula-intersection", inter == d.level)


# --------------------------------------------------------------------------
# subdifferential membership


def scalar_derivative(f, zs, x0, d, kmax: int = 20) -> ExtReal:
    """``inf_t (1/t)[phi(x0 + t d) -. phi(x0)]`` over ``t = 2^-k`` in extended reals."""
    p0 = sm.scalarize(f, zs, x0)
    best = PLUS_INF
    prev = None
    for k in range(kmax + 1):
        tt = Fraction(1, 2 ** k)
        q = inf_residuate(sm.scalarize(f, zs, tuple(a + tt * b for a, b in zip(x0, d))), p0)
        q = q if not q.is_finite else ExtReal(q.value / tt)
        best = min(best, q)
        if q.is_finite and prev == q:
            break
        prev = q
    return best


def complete_directions(f, x0, subdiff) -> list[tuple]:
    """``0``, ``±e_i`` and the negated facet normals of the subdifferential."""
    n = f.nx
    dirs = [(ZERO,) * n]
    for i in range(n):
        for s in (1, -1):
            dirs.append(tuple(Fraction(s if j == i else 0) for j in range(n)))
    if not subdiff.is_empty():
        for a, _ in ph.canonical(subdiff.hpoly).rows:
            dirs.append(tuple(-v for v in a))
    return dirs


def membership_query(rng: random.Random, kind: str | None = None):
    """``(f, z*, x0, x*)`` with a target mix of members, non-members and degenerate cases."""
    kind = kind or rng.choice(("member", "member", "nonmember", "random", "outside", "improper"))
    if kind == "improper":
        for _ in range(50):
            m = inst.random_map(rng, proper=False)
            zs = inst.random_zstar(rng, m.f.cone)
            if sm.scalarize(m.f, zs, m.x0).is_minus_inf:
                return m.f, zs, m.x0, inst.random_direction(rng, m.f.nx), kind
        kind = "random"
    m = inst.random_map(rng, proper=kind != "random")
    f, zs, x0 = m.f, m.zstar, m.x0
    if kind == "outside":
        for _ in range(10):
            p = tuple(v + rng.choice((-5, 5)) for v in x0)
            if not sm.in_domain(f, p):
                return f, zs, p, inst.random_direction(rng, f.nx), kind
        kind = "random"
    S = sm.subdifferential(f, zs, x0)
    if kind in ("member", "nonmember") and not S.is_empty():
        G = S.hpoly.generators
        if kind == "member":
            v = rng.choice(G.vertices)
            extra = [r for r in G.rays + G.lines]
            w = rng.choice(extra) if extra and rng.random() < 0.5 else (ZERO,) * f.nx
            return f, zs, x0, tuple(a + b for a, b in zip(v, w)), kind
        v = rng.choice(G.vertices)
        return f, zs, x0, tuple(a + rng.choice((-1, 1)) * (1 if i == 0 else 0) for i, a in enumerate(v)), kind
    return f, zs, x0, inst.random_direction(rng, f.nx), kind


def check_membership(t: Tally, f, zs, x0, xs):
    C = f.cone
    S = sm.subdifferential(f, zs, x0)
    truth = sm.subdiff_contains(f, zs, x0, xs)
    t.exercised["queries-member" if truth else "queries-nonmember"] += 1
    t.check("contains=hpoly", truth == (not S.is_empty() and ph.contains_point(S.hpoly, xs)))
    t.check("contains=lifted", truth == S.contains(xs) if not S.is_empty() else not truth)
    dirs = complete_directions(f, x0, S)

    # S(x) ⊇ f'(x0, x) on a direction set that is complete for polyhedral data
    a = all(lat.superset(lat.S_eval(xs, zs, d, C), sm.dir_derivative(f, zs, x0, d).to_upper(C)) for d in dirs)
    t.check("derivative-minorant", a == truth, (a, truth))

    # subdifferential inequality at x0 + t* d, t* from quotient stabilization
    samples = list(orc.vertex_samples(f, x0))
    for d in dirs:
        try:
            _, levels = orc.derivative_oracle(f, zs, x0, d)
            tt = orc.quotient_step(levels)
        except orc.OracleFailure:
            tt = Fraction(1, 2 ** 20)
        samples.append(tuple(u + tt * v for u, v in zip(x0, d)))
    b = orc.subdiff_oracle(f, zs, x0, xs, samples)
    t.check("subgradient-inequality", b == truth, (b, truth))

    # scalar subgradient inequality with the inf-residuation on extended reals
    sc = all(ExtReal(dot(xs, d)) <= scalar_derivative(f, zs, x0, d) for d in dirs)
    t.check("scalar-subgradient", sc == truth, (sc, truth))

    fx0 = sm.evaluate(f, x0)
    side = (not ph.is_empty(f.domain)) and hclass(fx0, zs) != "Z"
    if side:
        left = lat.oplus(fx0, lat.S_eval(xs, zs, tuple(-v for v in x0), C))
        c_ok = all(lat.superset(left, lat.oplus(sm.evaluate(f, p), lat.S_eval(xs, zs, tuple(-v for v in p), C)))
                   for p in samples)
        right = lat.z_residuate(lat.S_eval(xs, zs, x0, C), fx0, zs)
        d_ok = all(lat.superset(lat.z_residuate(lat.S_eval(xs, zs, p, C), sm.evaluate(f, p), zs), right)
                   for p in samples)
        t.check("sum-form-inequality", c_ok == truth, (c_ok, truth))
        t.check("residual-form-inequality", d_ok == truth, (d_ok, truth))
    if side and sm.in_domain(f, x0):
        neg = sm.conjugate_neg(f, xs, zs).to_upper(C)
        b11 = lat.equal(neg, lat.oplus(fx0, lat.S_eval(xs, zs, tuple(-v for v in x0), C)))
        pos = sm.conjugate_pos(f, xs, zs).to_upper(C)
        c11 = lat.equal(pos, lat.z_residuate(lat.S_eval(xs, zs, x0, C), fx0, zs))
        t.check("negative-conjugate-identity", b11 == truth, (b11, truth))
        t.check("conjugate-identity", c11 == truth, (c11, truth))
    if not side and not ph.is_empty(f.domain):
        t.check("degenerate-no-subgradient", not truth)


# --------------------------------------------------------------------------
# duality


def proportional_choices(rng, zs):
    third = tuple(-v / 3 for v in zs)
    opts = [(ZERO,) * len(zs), tuple(-v for v in zs), tuple(-2 * v for v in zs), third]
    while True:
        u = inst.random_direction(rng, len(zs))
        if an.proportional_factor(u, zs) is None:
            opts.append(u)
            return opts


def check_duality(t: Tally, rng: random.Random, f, zs, x0):
    C = f.cone
    F = an.derivative_process(f, zs, x0)
    S = sm.subdifferential(f, zs, x0)
    for u in proportional_choices(rng, zs):
        got = an.adjoint_of_derivative(f, x0, zs, u)
        ref = an.adjoint_process(F, u)
        t.check("adjoint-table=adjoint-process", ph.poly_equal(got, ref), u)
        s = an.proportional_factor(u, zs)
        if s is None:
            t.check("adjoint-nonproportional-empty", ph.is_empty(got))
        elif s == 0:
            T = ph.tangent_cone(f.domain, x0)
            t.check("adjoint-normal-cone", ph.poly_equal(got, ph.polar_cone(T)))
        else:
            ref2 = HPoly.empty(f.nx) if S.is_empty() else ph.scale(S.projected_fm(), s)
            t.check("adjoint-scaled-subdiff", ph.poly_equal(got, ref2), s)
            if not S.is_empty():
                Ss = sm.subdifferential(f, tuple(s * v for v in zs), x0)
                t.check("subdiff-scaling", ph.poly_equal(Ss.hpoly, ph.scale(S.hpoly, s)))

    phi = sm.scalarize(f, zs, x0)
    fx0 = sm.evaluate(f, x0)
    z_opts = []
    if phi.is_finite:
        out = lp.solve(lp.LinearProgram(tuple(-v for v in zs), fx0.poly.rows if fx0.is_proper else ()))
        if isinstance(out, lp.Optimal):
            z_opts.append(tuple(out.x))
            ray = next((r for r in C.generators.rays if dot(zs, r) < 0), None)
            if ray is not None:
                z_opts.append(tuple(a + b for a, b in zip(out.x, ray)))
    if not z_opts:
        p = ph.feasible_point(fx0.as_hpoly())
        if p is not None:
            z_opts.append(tuple(p))
    for z0 in z_opts:
        for w in (zs, (ZERO,) * f.nz):
            got = an.coderivative(f, x0, z0, w)
            ref = an.coderivative_from_normal_cone(f, x0, z0, w)
            t.check("coderivative=normal-cone", ph.poly_equal(got, ref), (z0, w))
        attained = phi.is_finite and -dot(zs, z0) == phi.value
        got = an.coderivative(f, x0, z0, zs)
        t.check("coderivative-iff-attained", (not ph.is_empty(got)) == (attained and not S.is_empty()))
        if not attained and not S.is_empty():
            t.exercised["empty-coderivative-nonempty-subdiff"] += 1


# --------------------------------------------------------------------------
# optimization layer


def translated(f: sm.SetValuedMap, m) -> sm.SetValuedMap:
    """``x -> f(m + x)``."""
    m = tuple(Fraction(v) for v in m)
    return sm.SetValuedMap.from_rows(f.nx, f.nz, f.cone, [(A, B, c - dot(A, m)) for A, B, c in f.rows])


def translate_support(f, pts, x, zs) -> ExtReal:
    """``sup{z*.z : z in f(m + x), m in co(pts)}`` by an LP in barycentric coordinates."""
    k, nz = len(pts), f.nz
    rows = []
    for A, B, c in f.rows:
        coeffs = tuple(dot(A, p) for p in pts) + B
        rows.append((coeffs, c - dot(A, x)))
    for i in range(k):
        rows.append((tuple(Fraction(1 if j == i else 0) for j in range(k)) + (ZERO,) * nz, ZERO))
    eq = [((Fraction(1),) * k + (ZERO,) * nz, Fraction(1))]
    return lp.maximize((ZERO,) * k + tuple(zs), rows, eq)


def optimization_instance(rng: random.Random):
    m = inst.random_map(rng, proper=True)
    f = m.f
    pts = inst.domain_points(rng, f, m.x0, rng.randint(1, 3))
    roll = rng.random()
    if roll < 0.4:
        G = f.graph.generators
        verts = [tuple(v[: f.nx]) for v in G.vertices]
        if verts:
            pts = list(dict.fromkeys(verts + pts[:1]))
    return f, pts, m


def check_optimization(t: Tally, rng, f, pts, zs_pool):
    I = an.infimum(f)
    coM = sm.convex_hull_points(pts, f.nx)
    g = sm.inf_translate(f, coM)
    x = inst.random_direction(rng, f.nx, -2, 2)

    # M ⊆ N gives a smaller value
    N = pts + [inst.random_direction(rng, f.nx, -2, 2)]
    t.check("translate-monotone", lat.superset(sm.inf_translate_at(f, N, x), sm.inf_translate_at(f, pts, x)))
    t.check("translate-monotone-hull", lat.superset(sm.evaluate(g, x), sm.inf_translate_at(f, pts, x)))
    # same infimum for co M (projected map) and finite M (union of translated infima)
    t.check("translate-infimum-hull", lat.equal(an.infimum(g), I))
    union = lat.inf_family([an.infimum(translated(f, m)) for m in pts], f.cone)
    t.check("translate-infimum-points", lat.equal(union, I))
    # convexity of the translated map and the closed-union formula
    x1, x2 = x, inst.random_direction(rng, f.nx, -2, 2)
    lam = Fraction(rng.randint(1, 3), 4)
    mid = tuple(lam * a + (1 - lam) * b for a, b in zip(x1, x2))
    comb = lat.oplus(lat.scale(lam, sm.evaluate(g, x1)), lat.scale(1 - lam, sm.evaluate(g, x2)))
    t.check("translate-convex", lat.superset(sm.evaluate(g, mid), comb))
    gx = sm.evaluate(g, x)
    for zs in zs_pool:
        t.check("translate-support-lp", gx.support(zs) == translate_support(f, pts, x, zs))

    # three independently computed statements
    zero = (ZERO,) * f.nx
    a = an.is_infimizer(f, pts).holds
    b = lat.equal(sm.inf_translate_at(f, pts, zero), union)
    c = an.is_infimizer(g, [zero]).holds and lat.equal(sm.inf_translate_at(f, pts, zero), sm.evaluate(g, zero))
    t.check("infimizer<=>pointwise-union", a == b, (a, b))
    t.check("infimizer<=>zero-infimizer-of-translate", a == c, (a, c))
    t.exercised["infimizer-instances"] += a
    t.check("dom f is an infimizer", an.is_infimizer(f, f.domain).holds)
    if a:
        extra = inst.domain_points(rng, f, pts[0], 2)[-1]
        t.check("infimizer-stable-under-adding", an.is_infimizer(f, pts + [extra]).holds)

    # necessity of the optimality conditions, and falsification for non-infimizers
    if sm.is_proper(f) and not I.is_ambient:
        rep = an.optimality_check(f, pts, zs_pool, seed=rng.randint(0, 10 ** 6))
        t.check("optimality-necessity", rep.necessity_ok)
        t.check("optimality-infimizer-flag", rep.infimizer == a)
        if a:
            t.check("optimality-conditions-hold-at-infimizers", not rep.falsified)
        if rep.falsified:
            t.exercised["optimality-falsified"] += 1
            t.check("optimality-falsified-only-non-infimizers", not a)
        if len(pts) == 1 and not a:
            t.exercised["non-infimizer-singletons"] += 1
