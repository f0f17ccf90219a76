"""
Spans of groupoids and their algebra.

A span ``Y <-q- S -p-> X`` is stored with ``left = q`` (to the codomain Y)
and ``right = p`` (to the domain X).  Composition, application to a
groupoid over X and inner products all go through :class:`WeakPullback`.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import cached_property

from . import config
from .errors import BoundaryError, GroupoidError, ResourceLimitError
from .groupoid import (
    CoproductGroupoid,
    FiniteGroupoid,
    Functor,
    FullSubgroupoid,
    Groupoid,
    NaturalIso,
    ProductGroupoid,
    ValidationReport,
    check_equivalence,
    compose_functors,
    identity_functor,
    terminal,
    validate_functor,
    validate_natural_iso,
)


def same_groupoid(a: Groupoid, b: Groupoid) -> bool:
    if a is b:
        return True
    if isinstance(a, FiniteGroupoid) and isinstance(b, FiniteGroupoid):
        return (a.num_objects == b.num_objects and a.src == b.src and a.tgt == b.tgt
                and a.ident == b.ident and a.inv == b.inv and a.table == b.table)
    return False


def _require_same(a: Groupoid, b: Groupoid, what: str) -> None:
    if not same_groupoid(a, b):
        raise BoundaryError(f"{what}: groupoids do not match")


# ---------------------------------------------------------------------------
# types


@dataclass
class GroupoidOver:
    total: Groupoid
    base: Groupoid
    projection: Functor

    def __post_init__(self):
        if self.projection.source is not self.total or self.projection.target is not self.base:
            raise BoundaryError("projection must go from total to base")


@dataclass
class Span:
    """``left: apex -> codomain``, ``right: apex -> domain``."""

    apex: Groupoid
    left: Functor
    right: Functor

    def __post_init__(self):
        if self.left.source is not self.apex or self.right.source is not self.apex:
            raise BoundaryError("both legs must start at the apex")

    @property
    def codomain(self) -> Groupoid:
        return self.left.target

    @property
    def domain(self) -> Groupoid:
        return self.right.target


@dataclass
class Cospan:
    left: Functor     # X -> Z
    right: Functor    # Y -> Z

    def __post_init__(self):
        _require_same(self.left.target, self.right.target, "cospan")


@dataclass
class SpanMap:
    """Functor between apexes with ``left_iso: q => q'F`` and ``right_iso: p => p'F``."""

    source: Span
    target: Span
    functor: Functor
    left_iso: NaturalIso
    right_iso: NaturalIso


@dataclass
class SpanEquivalence:
    forward: SpanMap
    backward: SpanMap
    unit: NaturalIso      # GF => 1 on the source apex


# ---------------------------------------------------------------------------
# weak pullback


class WeakPullback(Groupoid):
    """Weak pullback of ``f: X -> Z <- Y :g``.

    Objects are triples ``(s, t, α)`` with ``α: f(s) -> g(t)``, numbered in
    lexicographic order.  Each pair ``(u: s -> s', v: t -> t')`` is a
    morphism out of ``(s, t, α)``, landing on ``(s', t', g(v)∘α∘f(u)⁻¹)``;
    it has id ``offset[o] + index(u)*outdeg(t) + index(v)``.
    """

    def __init__(self, f: Functor, g: Functor, cap: int | None = None):
        _require_same(f.target, g.target, "weak pullback")
        self.f, self.g = f, g
        X, Y, Z = f.source, g.source, f.target
        self.X, self.Y, self.Z = X, Y, Z
        cap = config.pullback_cap() if cap is None else cap

        zc = Z.classes
        by_class: dict[int, list[int]] = {}
        for t in Y.objects:
            by_class.setdefault(zc.index(g.ob(t)), []).append(t)
        fs = [f.ob(s) for s in X.objects]
        candidates = 0
        for s in X.objects:
            k = zc.index(fs[s])
            ts = by_class.get(k)
            if ts:
                candidates += len(ts) * Z.aut_order(fs[s])
        if candidates > cap:
            raise ResourceLimitError(
                f"weak pullback needs {candidates} candidate triples, cap is {cap}")

        self.obj_s: list[int] = []
        self.obj_t: list[int] = []
        self.obj_a: list[int] = []
        for s in X.objects:
            for t in by_class.get(zc.index(fs[s]), ()):
                for a in sorted(Z.hom(fs[s], g.ob(t))):
                    self.obj_s.append(s)
                    self.obj_t.append(t)
                    self.obj_a.append(a)
        self.num_objects = len(self.obj_s)
        self.index = {(s, t, a): o for o, (s, t, a) in
                      enumerate(zip(self.obj_s, self.obj_t, self.obj_a))}
        self.offsets = [0]
        for o in range(self.num_objects):
            d = X.out_degree(self.obj_s[o]) * Y.out_degree(self.obj_t[o])
            self.offsets.append(self.offsets[-1] + d)

    def object(self, o: int) -> tuple[int, int, int]:
        return self.obj_s[o], self.obj_t[o], self.obj_a[o]

    def object_index(self, s: int, t: int, a: int) -> int:
        return self.index[s, t, a]

    def num_morphisms(self) -> int:
        return self.offsets[-1]

    def decode(self, m: int) -> tuple[int, int, int]:
        """Morphism id -> (source object, u, v)."""
        o = bisect.bisect_right(self.offsets, m) - 1
        k = m - self.offsets[o]
        s, t = self.obj_s[o], self.obj_t[o]
        iu, iv = divmod(k, self.Y.out_degree(t))
        return o, self.X.out(s)[iu], self.Y.out(t)[iv]

    def encode(self, o: int, u: int, v: int) -> int:
        s, t = self.obj_s[o], self.obj_t[o]
        return (self.offsets[o] + self.X.out_index(s, u) * self.Y.out_degree(t)
                + self.Y.out_index(t, v))

    def _land(self, o: int, u: int, v: int) -> int:
        Z = self.Z
        a = self.obj_a[o]
        a2 = Z.compose(self.g.mor(v), Z.compose(a, Z.inverse(self.f.mor(u))))
        return self.index[self.X.target(u), self.Y.target(v), a2]

    def source(self, m: int) -> int:
        return bisect.bisect_right(self.offsets, m) - 1

    def target(self, m: int) -> int:
        return self._land(*self.decode(m))

    def identity(self, o: int) -> int:
        return self.encode(o, self.X.identity(self.obj_s[o]), self.Y.identity(self.obj_t[o]))

    def inverse(self, m: int) -> int:
        o, u, v = self.decode(m)
        return self.encode(self._land(o, u, v), self.X.inverse(u), self.Y.inverse(v))

    def compose(self, m2: int, m1: int) -> int:
        o1, u1, v1 = self.decode(m1)
        o2, u2, v2 = self.decode(m2)
        if self._land(o1, u1, v1) != o2:
            raise GroupoidError(f"composite of {m2} after {m1} is not defined")
        return self.encode(o1, self.X.compose(u2, u1), self.Y.compose(v2, v1))

    def out(self, o: int) -> range:
        return range(self.offsets[o], self.offsets[o + 1])

    def out_degree(self, o: int) -> int:
        return self.offsets[o + 1] - self.offsets[o]

    def out_index(self, o: int, m: int) -> int:
        return m - self.offsets[o]

    def hom(self, o1: int, o2: int) -> list[int]:
        if self.classes.index(o1) != self.classes.index(o2):
            return []
        Z = self.Z
        s1, t1, a1 = self.object(o1)
        s2, t2, a2 = self.object(o2)
        # (u, v) lands on o2 iff g(v) = a2∘f(u)∘a1⁻¹
        by_image: dict[int, list[int]] = {}
        for v in self.Y.hom(t1, t2):
            by_image.setdefault(self.g.mor(v), []).append(v)
        a1_inv = Z.inverse(a1)
        found = []
        for u in self.X.hom(s1, s2):
            need = Z.compose(a2, Z.compose(self.f.mor(u), a1_inv))
            for v in by_image.get(need, ()):
                found.append(self.encode(o1, u, v))
        return sorted(found)

    def aut_order(self, o: int) -> int:
        # |Mor(o, -)| = |[o]| * |Aut(o)|
        c = self.classes
        return self.out_degree(o) // c.size(c.index(o))

    def _compute_classes(self):
        # Same walk as the generic version, but acting on triples directly
        # with the leg images of each generator computed once.
        from .groupoid import _union_find_classes
        X, Y, Z, index = self.X, self.Y, self.Z, self.index
        x_moves: dict[int, list[tuple[int, int]]] = {}
        y_moves: dict[int, list[tuple[int, int]]] = {}

        def moves_x(s):
            got = x_moves.get(s)
            if got is None:
                got = x_moves[s] = [(X.target(u), Z.inverse(self.f.mor(u)))
                                    for u in X.generators(s)]
            return got

        def moves_y(t):
            got = y_moves.get(t)
            if got is None:
                got = y_moves[t] = [(Y.target(v), self.g.mor(v)) for v in Y.generators(t)]
            return got

        def edges():
            for o in range(self.num_objects):
                s, t, a = self.obj_s[o], self.obj_t[o], self.obj_a[o]
                for s2, fu_inv in moves_x(s):
                    yield o, index[s2, t, Z.compose(a, fu_inv)]
                for t2, gv in moves_y(t):
                    yield o, index[s, t2, Z.compose(gv, a)]

        return _union_find_classes(self.num_objects, edges())

    def generators(self, o: int) -> list[int]:
        s, t = self.obj_s[o], self.obj_t[o]
        ids, idt = self.X.identity(s), self.Y.identity(t)
        return ([self.encode(o, u, idt) for u in self.X.generators(s)]
                + [self.encode(o, ids, v) for v in self.Y.generators(t)])

    @cached_property
    def pi1(self) -> Functor:
        return Functor(self, self.X, self.obj_s.__getitem__, lambda m: self.decode(m)[1])

    @cached_property
    def pi2(self) -> Functor:
        return Functor(self, self.Y, self.obj_t.__getitem__, lambda m: self.decode(m)[2])


def weak_pullback(c: Cospan, cap: int | None = None) -> tuple[WeakPullback, Functor, Functor]:
    P = WeakPullback(c.left, c.right, cap)
    return P, P.pi1, P.pi2


# ---------------------------------------------------------------------------
# operations


def essential_preimage(v: GroupoidOver, x: int) -> FullSubgroupoid:
    """Full subgroupoid of the total groupoid on objects over something ≅ x."""
    v.base.check_object(x)
    bc = v.base.classes
    k = bc.index(x)
    objs = [a for a in v.total.objects if bc.index(v.projection.ob(a)) == k]
    return FullSubgroupoid(v.total, objs)


def apply_span(S: Span, v: GroupoidOver) -> GroupoidOver:
    """Pull ``v`` back along the right leg and push forward along the left."""
    _require_same(v.base, S.domain, "apply_span")
    P = WeakPullback(S.right, v.projection)
    return GroupoidOver(P, S.codomain, compose_functors(S.left, P.pi1))


def compose(T: Span, S: Span) -> Span:
    """T∘S for ``S: X -> Y`` and ``T: Y -> Z``; apex objects are ``(s, t, α)``."""
    _require_same(S.codomain, T.domain, "compose")
    P = WeakPullback(S.left, T.right)
    return Span(P, compose_functors(T.left, P.pi2), compose_functors(S.right, P.pi1))


def _coproduct_leg(C: CoproductGroupoid, a: Functor, b: Functor) -> Functor:
    no, nm = C.no, C.nm

    def ob(x: int) -> int:
        return a.ob(x) if x < no else b.ob(x - no)

    def mor(m: int) -> int:
        return a.mor(m) if m < nm else b.mor(m - nm)

    return Functor(C, a.target, ob, mor)


def span_sum(S: Span, T: Span) -> Span:
    _require_same(S.domain, T.domain, "sum")
    _require_same(S.codomain, T.codomain, "sum")
    C = CoproductGroupoid(S.apex, T.apex)
    return Span(C, _coproduct_leg(C, S.left, T.left), _coproduct_leg(C, S.right, T.right))


def scalar(L: Groupoid, S: Span) -> Span:
    """Λ × S with both legs through the second projection."""
    P = ProductGroupoid(L, S.apex)
    _, p2 = P.projections
    return Span(P, compose_functors(S.left, p2), compose_functors(S.right, p2))


def identity_span(X: Groupoid) -> Span:
    one = identity_functor(X)
    return Span(X, one, one)


def adjoint(S: Span) -> Span:
    return Span(S.apex, S.right, S.left)


def over_sum(a: GroupoidOver, b: GroupoidOver) -> GroupoidOver:
    _require_same(a.base, b.base, "sum")
    C = CoproductGroupoid(a.total, b.total)
    return GroupoidOver(C, a.base, _coproduct_leg(C, a.projection, b.projection))


def over_scalar(L: Groupoid, v: GroupoidOver) -> GroupoidOver:
    P = ProductGroupoid(L, v.total)
    return GroupoidOver(P, v.base, compose_functors(v.projection, P.projections[1]))


def point_over(X: Groupoid, x: int) -> GroupoidOver:
    """One object with no automorphisms, sitting over x."""
    X.check_object(x)
    pt = terminal()
    return GroupoidOver(pt, X, Functor(pt, X, [x], [X.identity(x)]))


def empty_over(X: Groupoid) -> GroupoidOver:
    e = FiniteGroupoid(0, [], [], [], [], {})
    return GroupoidOver(e, X, Functor(e, X, [], []))


def tautological_over(X: Groupoid) -> GroupoidOver:
    return GroupoidOver(X, X, identity_functor(X))


def inner_product_groupoid(phi: GroupoidOver, psi: GroupoidOver) -> WeakPullback:
    _require_same(phi.base, psi.base, "inner product")
    return WeakPullback(phi.projection, psi.projection)


# ---------------------------------------------------------------------------
# span maps and equivalences


def identity_span_map(S: Span) -> SpanMap:
    one = identity_functor(S.apex)
    return SpanMap(S, S, one,
                   NaturalIso(S.left, S.left, lambda s: S.codomain.identity(S.left.ob(s))),
                   NaturalIso(S.right, S.right, lambda s: S.domain.identity(S.right.ob(s))))


def check_span_map(M: SpanMap) -> ValidationReport:
    """A functor between apexes plus natural isos ``p => p'F``, ``q => q'F``."""
    report = ValidationReport()
    S, T, F = M.source, M.target, M.functor
    if F.source is not S.apex or F.target is not T.apex:
        report.add("span_map_endpoints", ())
        return report
    report.extend(validate_functor(F), "functor_")
    for name, leg, leg2, iso in (("left", S.left, T.left, M.left_iso),
                                 ("right", S.right, T.right, M.right_iso)):
        want = NaturalIso(leg, compose_functors(leg2, F), iso.__getitem__)
        report.extend(validate_natural_iso(want), f"{name}_iso_")
    return report


def check_span_equivalence(e: SpanEquivalence) -> ValidationReport:
    """Verify a witnessed span equivalence.

    The forward functor must be an equivalence, both span maps valid, γ a
    natural iso GF => 1, and at every apex object s:
    ``p(γ_s) ∘ α'_{F(s)} ∘ α_s = 1`` and likewise for q.
    """
    report = ValidationReport()
    fwd, bwd = e.forward, e.backward
    S = fwd.source
    if bwd.source is not fwd.target or bwd.target is not S:
        report.add("span_maps_not_opposite", ())
        return report
    eq = check_equivalence(fwd.functor)
    for flag in ("functor_ok", "faithful", "full", "essentially_surjective"):
        if not getattr(eq, flag):
            report.add("forward_not_" + flag, ())
    report.extend(check_span_map(fwd), "forward_")
    report.extend(check_span_map(bwd), "backward_")
    F, G = fwd.functor, bwd.functor
    GF = compose_functors(G, F)
    gamma = NaturalIso(GF, identity_functor(S.apex), e.unit.__getitem__)
    report.extend(validate_natural_iso(gamma), "unit_")
    if not report.ok:
        return report
    for name, leg, a, a2 in (("p", S.right, fwd.right_iso, bwd.right_iso),
                             ("q", S.left, fwd.left_iso, bwd.left_iso)):
        B = leg.target
        for s in S.apex.objects:
            loop = B.compose(leg.mor(gamma[s]), B.compose(a2[F.ob(s)], a[s]))
            if loop != B.identity(leg.ob(s)):
                report.add("triangle_" + name, s)
    return report


def associator(T: Span, S: Span, R: Span) -> SpanEquivalence:
    """Witness T(SR) ≃ (TS)R.

    ``((r, s, α), t, β) ↦ (r, (s, t, β), α)`` and back; all natural isos are
    identities.
    """
    SR = compose(S, R)
    left = compose(T, SR)
    TS = compose(T, S)
    right = compose(TS, R)
    A, B = left.apex, right.apex
    inner_l, inner_r = SR.apex, TS.apex

    def fwd_ob(o: int) -> int:
        x, t, beta = A.object(o)
        r, s, alpha = inner_l.object(x)
        return B.object_index(r, inner_r.object_index(s, t, beta), alpha)

    def fwd_mor(m: int) -> int:
        o, kj, h = A.decode(m)
        xo, k, j = inner_l.decode(kj)
        y = B.object(fwd_ob(o))[1]
        return B.encode(fwd_ob(o), k, inner_r.encode(y, j, h))

    def bwd_ob(o: int) -> int:
        r, y, alpha = B.object(o)
        s, t, beta = inner_r.object(y)
        return A.object_index(inner_l.object_index(r, s, alpha), t, beta)

    def bwd_mor(m: int) -> int:
        o, k, jh = B.decode(m)
        yo, j, h = inner_r.decode(jh)
        x = A.object(bwd_ob(o))[0]
        return A.encode(bwd_ob(o), inner_l.encode(x, k, j), h)

    F = Functor(A, B, fwd_ob, fwd_mor)
    G = Functor(B, A, bwd_ob, bwd_mor)

    def ident_iso(span: Span, leg: str) -> NaturalIso:
        f = getattr(span, leg)
        return NaturalIso(f, f, lambda o: f.target.identity(f.ob(o)))

    forward = SpanMap(left, right, F, ident_iso(left, "left"), ident_iso(left, "right"))
    backward = SpanMap(right, left, G, ident_iso(right, "left"), ident_iso(right, "right"))
    return SpanEquivalence(forward, backward, NaturalIso(compose_functors(G, F),
                                                        identity_functor(A), A.identity))


def skeleton_span(S: Span) -> tuple[Span, SpanEquivalence]:
    """Restrict a span to a skeleton of its apex, with the equivalence witness."""
    from .groupoid import skeleton
    sk = skeleton(S.apex)
    Sk = sk.groupoid
    small = Span(Sk, compose_functors(S.left, sk.inclusion), compose_functors(S.right, sk.inclusion))
    r, i = sk.retraction, sk.inclusion
    # α_s = leg(η_s)⁻¹ : leg(s) -> leg(i(r(s)))
    def to_small(leg: Functor) -> NaturalIso:
        B = leg.target
        return NaturalIso(leg, leg, lambda s: B.inverse(leg.mor(sk.unit[s])))

    def to_big(leg: Functor) -> NaturalIso:
        B = leg.target
        return NaturalIso(leg, leg, lambda s: B.identity(leg.ob(s)))

    forward = SpanMap(S, small, r, to_small(S.left), to_small(S.right))
    backward = SpanMap(small, S, i, to_big(small.left), to_big(small.right))
    return small, SpanEquivalence(forward, backward, sk.unit)


def bloat_span(S: Span, copies: int = 2) -> tuple[Span, SpanEquivalence]:
    """Equivalent span whose apex holds ``copies`` isomorphic duplicates of
    every apex object, joined by connecting isomorphisms.

    The witness runs from the bloated span back to ``S``: forward is the
    projection, backward picks copy 0, and γ_(i, s) is the connecting iso
    from copy 0 to copy i.
    """
    from .groupoid import codiscrete
    D = codiscrete(copies)
    P = ProductGroupoid(D, S.apex)
    _, p2 = P.projections
    big = Span(P, compose_functors(S.left, p2), compose_functors(S.right, p2))
    n = S.apex.num_objects
    F = p2
    # copy 0 of object s is object s of the product
    G = Functor(S.apex, P, lambda s: s, lambda m: P.morphism(D.identity(0), m))

    def gamma(o: int) -> int:
        # (copy 0 -> copy i) x identity
        i, s = divmod(o, n)
        return P.morphism(D.hom(0, i)[0], S.apex.identity(s))

    def ident(leg: Functor) -> NaturalIso:
        return NaturalIso(leg, leg, lambda o: leg.target.identity(leg.ob(o)))

    forward = SpanMap(big, S, F, ident(big.left), ident(big.right))
    backward = SpanMap(S, big, G, ident(S.left), ident(S.right))
    return big, SpanEquivalence(
        forward, backward, NaturalIso(compose_functors(G, F), identity_functor(P), gamma))

