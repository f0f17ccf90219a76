"""
Flags of the projective plane over a prime field and the Hecke algebra
they carry.

Points are nonzero vectors of F_q^3 and lines nonzero covectors, each scaled
so the first nonzero coordinate is 1.  A flag is an incident (point, line)
pair.  SL(3, q) acts on points by v ↦ gv and on lines by ℓ ↦ ℓg⁻¹.

Two routes to the algebra are kept side by side: relations on flags
composed by counting paths, and the span (X×X×X)//G → (X×X)//G × (X×X)//G,
(X×X)//G degroupoidified to a matrix.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from . import config
from .degroupoidify import frac_str, matrix, vector
from .errors import BoundError
from .groupoid import (
    ActionGroupoid,
    FullSubgroupoid,
    Functor,
    GroupAction,
    ProductGroupoid,
    ValidationReport,
)
from .groups import ElementGroup
from .span import GroupoidOver, Span


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


class PrimeField:
    def __init__(self, p: int):
        if not is_prime(p):
            raise BoundError(f"{p} is not prime; only prime fields F_p are supported")
        self.p = p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def violations(self) -> list[tuple[str, tuple]]:
        p, bad = self.p, []
        for a in range(p):
            if a and a * self.inv(a) % p != 1:
                bad.append(("inverse", (a,)))
            for b in range(p):
                for c in range(p):
                    if a * (b + c) % p != (a * b + a * c) % p:
                        bad.append(("distributivity", (a, b, c)))
        return bad


def normalize(v: tuple[int, ...], p: int) -> tuple[int, ...]:
    for x in v:
        if x:
            s = pow(x, p - 2, p)
            return tuple(y * s % p for y in v)
    raise ValueError("zero vector")


def cross(a, b, p: int) -> tuple[int, int, int]:
    return ((a[1] * b[2] - a[2] * b[1]) % p,
            (a[2] * b[0] - a[0] * b[2]) % p,
            (a[0] * b[1] - a[1] * b[0]) % p)


def dot(a, b, p: int) -> int:
    return sum(x * y for x, y in zip(a, b)) % p


class ProjectivePlane:
    def __init__(self, q: int):
        self.field = PrimeField(q)
        if q > config.PLANE_MAX_Q:
            raise BoundError(f"q={q} exceeds the plane bound {config.PLANE_MAX_Q}")
        self.q = q
        vecs = sorted({normalize(v, q) for v in itertools.product(range(q), repeat=3) if any(v)})
        self.points = vecs
        self.lines = list(vecs)
        self.point_index = {v: i for i, v in enumerate(self.points)}
        self.line_index = {v: i for i, v in enumerate(self.lines)}
        self.on_line = [[i for i, pt in enumerate(self.points) if dot(pt, ln, q) == 0]
                        for ln in self.lines]
        self.through = [[] for _ in self.points]
        for l, pts in enumerate(self.on_line):
            for i in pts:
                self.through[i].append(l)
        self.incident = {(i, l) for l, pts in enumerate(self.on_line) for i in pts}
        report = self.verify()
        if not report.ok:
            raise AssertionError(f"projective plane axioms fail: {report.violations[:3]}")

    def join(self, a: int, b: int) -> int:
        """The line through two distinct points."""
        return self.line_index[normalize(cross(self.points[a], self.points[b], self.q), self.q)]

    def meet(self, l: int, m: int) -> int:
        """The point on two distinct lines."""
        return self.point_index[normalize(cross(self.lines[l], self.lines[m], self.q), self.q)]

    def verify(self) -> ValidationReport:
        r = ValidationReport()
        q = self.q
        n = q * q + q + 1
        if len(self.points) != n or len(self.lines) != n:
            r.add("count", len(self.points), len(self.lines))
        for l, pts in enumerate(self.on_line):
            if len(pts) != q + 1:
                r.add("points_per_line", l)
        for i, ls in enumerate(self.through):
            if len(ls) != q + 1:
                r.add("lines_per_point", i)
        for a, b in itertools.combinations(range(len(self.points)), 2):
            common = set(self.through[a]) & set(self.through[b])
            if len(common) != 1:
                r.add("unique_join", a, b)
        for l, m in itertools.combinations(range(len(self.lines)), 2):
            common = set(self.on_line[l]) & set(self.on_line[m])
            if len(common) != 1:
                r.add("unique_meet", l, m)
        return r

    @cached_property
    def flags(self) -> list[tuple[int, int]]:
        return sorted(self.incident)

    @cached_property
    def flag_index(self) -> dict[tuple[int, int], int]:
        return {f: i for i, f in enumerate(self.flags)}


@lru_cache(maxsize=None)
def projective_plane(q: int) -> ProjectivePlane:
    return ProjectivePlane(q)


def flags(q: int) -> list[tuple[int, int]]:
    return projective_plane(q).flags


# ---------------------------------------------------------------------------
# relations on flags


@dataclass
class RelationSpan:
    """Multiset of ordered flag pairs (pair -> positive multiplicity)."""

    size: int
    pairs: Counter

    def __eq__(self, other) -> bool:
        return (isinstance(other, RelationSpan) and self.size == other.size
                and +self.pairs == +other.pairs)

    def __add__(self, other: "RelationSpan") -> "RelationSpan":
        return RelationSpan(self.size, self.pairs + other.pairs)

    def times(self, k: int) -> "RelationSpan":
        return RelationSpan(self.size, Counter({p: k * c for p, c in self.pairs.items() if k * c}))


def identity_relation(n: int) -> RelationSpan:
    return RelationSpan(n, Counter({(i, i): 1 for i in range(n)}))


def relation_spans(q: int) -> tuple[RelationSpan, RelationSpan]:
    """P: same line, other point.  L: same point, other line."""
    plane = projective_plane(q)
    F, idx = plane.flags, plane.flag_index
    P, L = Counter(), Counter()
    for (p, l) in F:
        a = idx[p, l]
        for p2 in plane.on_line[l]:
            if p2 != p:
                P[a, idx[p2, l]] = 1
        for l2 in plane.through[p]:
            if l2 != l:
                L[a, idx[p, l2]] = 1
    return RelationSpan(len(F), P), RelationSpan(len(F), L)


def compose_relations(R2: RelationSpan, R1: RelationSpan) -> RelationSpan:
    """Multiplicity of (f1, f3) = Σ over f2 of R1(f1, f2)·R2(f2, f3)."""
    if R1.size != R2.size:
        raise BoundError("relations live on different flag sets")
    nxt: dict[int, list[tuple[int, int]]] = {}
    for (a, b), c in R2.pairs.items():
        nxt.setdefault(a, []).append((b, c))
    out: Counter = Counter()
    for (a, b), c in R1.pairs.items():
        for d, c2 in nxt.get(b, ()):
            out[a, d] += c * c2
    return RelationSpan(R1.size, out)


# ---------------------------------------------------------------------------
# SL(3, q)


def _det3(m, p: int) -> int:
    a, b, c, d, e, f, g, h, i = m
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p


def _matmul(x, y, p: int):
    return tuple(sum(x[3 * r + k] * y[3 * k + c] for k in range(3)) % p
                 for r in range(3) for c in range(3))


def _inverse3(m, p: int):
    a, b, c, d, e, f, g, h, i = m
    det_inv = pow(_det3(m, p), p - 2, p)
    adj = (e * i - f * h, c * h - b * i, b * f - c * e,
           f * g - d * i, a * i - c * g, c * d - a * f,
           d * h - e * g, b * g - a * h, a * e - b * d)
    return tuple(x * det_inv % p for x in adj)


def _apply(m, v, p: int):
    return tuple(sum(m[3 * r + k] * v[k] for k in range(3)) % p for r in range(3))


def _apply_right(ln, m, p: int):
    return tuple(sum(ln[k] * m[3 * k + c] for k in range(3)) % p for c in range(3))


def random_sl3(q: int, rng: random.Random):
    while True:
        m = tuple(rng.randrange(q) for _ in range(9))
        if _det3(m, q) == 1:
            return m


def flag_permutation(plane: ProjectivePlane, m) -> list[int]:
    """How the matrix m moves each flag (points by m, lines by m⁻¹ on the right)."""
    p = plane.q
    minv = _inverse3(m, p)
    pts = [plane.point_index[normalize(_apply(m, v, p), p)] for v in plane.points]
    lns = [plane.line_index[normalize(_apply_right(ln, minv, p), p)] for ln in plane.lines]
    idx = plane.flag_index
    return [idx[pts[a], lns[l]] for (a, l) in plane.flags]


@lru_cache(maxsize=None)
def sl3_group(q: int) -> ElementGroup:
    """Every 3×3 matrix over F_q with determinant 1, identity first."""
    if q > config.GROUP_ENUM_MAX_Q:
        raise BoundError(f"SL(3, {q}) is too large to enumerate (bound {config.GROUP_ENUM_MAX_Q})")
    PrimeField(q)
    ident = (1, 0, 0, 0, 1, 0, 0, 0, 1)
    mats = [m for m in itertools.product(range(q), repeat=9) if _det3(m, q) == 1 and m != ident]
    return ElementGroup([ident] + mats, lambda x, y: _matmul(x, y, q))


# ---------------------------------------------------------------------------
# relative position and orbits


A2_BASIS = ("1", "P", "L", "PL", "LP", "PLP")


def relative_position(plane: ProjectivePlane, f1: tuple[int, int], f2: tuple[int, int]) -> str:
    """Which of the six A2 cells the pair (f1, f2) lies in.

    "PL" means f2 is reached from f1 by moving the point along f1's line and
    then turning the line about the new point; "LP" the other way round.
    """
    (p1, l1), (p2, l2) = f1, f2
    if p1 == p2:
        return "1" if l1 == l2 else "L"
    if l1 == l2:
        return "P"
    if (p2, l1) in plane.incident:
        return "PL"
    if (p1, l2) in plane.incident:
        return "LP"
    return "PLP"


@dataclass
class OrbitData:
    q: int
    labels: tuple[str, ...]
    orbit_of: list[int]               # flag-pair index a*n + b -> basis position
    sizes: list[int]
    enumerated: bool                  # True when the group route ran
    routes_agree: bool | None

    def to_json(self) -> dict:
        return {"q": self.q, "labels": list(self.labels), "sizes": self.sizes,
                "count": len(self.labels), "enumerated": self.enumerated,
                "routes_agree": self.routes_agree}


def _orbits_by_group(perms: list[list[int]], n: int) -> list[int]:
    """Orbit number of each pair under the diagonal action; numbered by first pair."""
    orbit = [-1] * (n * n)
    k = 0
    for start in range(n * n):
        if orbit[start] >= 0:
            continue
        a, b = divmod(start, n)
        for pm in perms:
            orbit[pm[a] * n + pm[b]] = k
        k += 1
    return orbit


@lru_cache(maxsize=None)
def flag_perms(q: int) -> list[list[int]]:
    plane = projective_plane(q)
    return [flag_permutation(plane, m) for m in sl3_group(q).items]


def sl3_orbits(q: int) -> OrbitData:
    plane = projective_plane(q)
    F = plane.flags
    n = len(F)
    labels = A2_BASIS
    pos = {w: i for i, w in enumerate(labels)}
    by_class = [pos[relative_position(plane, F[a], F[b])] for a in range(n) for b in range(n)]
    sizes = [by_class.count(i) for i in range(len(labels))]
    if q > config.GROUP_ENUM_MAX_Q:
        return OrbitData(q, labels, by_class, sizes, False, None)
    by_group = _orbits_by_group(flag_perms(q), n)
    # the two partitions agree iff the labels correspond one to one
    pairing = set(zip(by_group, by_class))
    agree = (len(pairing) == len(set(by_group)) == len(set(by_class)))
    return OrbitData(q, labels, by_class, sizes, True, agree)


# ---------------------------------------------------------------------------
# geometric relations


@dataclass
class GeometricReport:
    q: int
    flags: int
    quadratic_P: bool
    quadratic_L: bool
    braid_fiberwise: bool
    bijection: bool
    equivariant: bool
    paths_plp: int
    checked: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.quadratic_P and self.quadratic_L and self.braid_fiberwise
                and self.bijection and self.equivariant)

    def to_json(self) -> dict:
        return {"q": self.q, "flags": self.flags, "quadratic_P": self.quadratic_P,
                "quadratic_L": self.quadratic_L, "braid_fiberwise": self.braid_fiberwise,
                "bijection": self.bijection, "equivariant": self.equivariant,
                "paths_plp": self.paths_plp, "ok": self.ok}


def plp_paths(plane: ProjectivePlane):
    """All (p1, l1, p2, l2, p3): point move, line turn, point move."""
    for (p1, l1) in plane.flags:
        for p2 in plane.on_line[l1]:
            if p2 == p1:
                continue
            for l2 in plane.through[p2]:
                if l2 == l1:
                    continue
                for p3 in plane.on_line[l2]:
                    if p3 != p2:
                        yield (p1, l1, p2, l2, p3)


def lpl_paths(plane: ProjectivePlane):
    """All (l1, p1, m, r, l2): line turn, point move, line turn."""
    for (p1, l1) in plane.flags:
        for m in plane.through[p1]:
            if m == l1:
                continue
            for r in plane.on_line[m]:
                if r == p1:
                    continue
                for l2 in plane.through[r]:
                    if l2 != m:
                        yield (l1, p1, m, r, l2)


def yang_baxter(plane: ProjectivePlane, path):
    """PLP path (p1,l1)→(p2,l1)→(p2,l2)→(p3,l2) to the LPL path with the
    same ends: turn about p1 onto the line through p1 and p3, move to p3,
    turn onto l2."""
    p1, l1, p2, l2, p3 = path
    return (l1, p1, plane.join(p1, p3), p3, l2)


def yang_baxter_inverse(plane: ProjectivePlane, path):
    l1, p1, m, r, l2 = path
    return (p1, l1, plane.meet(l1, l2), l2, r)


def _path_ends_plp(path):
    p1, l1, p2, l2, p3 = path
    return (p1, l1), (p3, l2)


def _path_ends_lpl(path):
    l1, p1, m, r, l2 = path
    return (p1, l1), (r, l2)


def _valid_lpl(plane: ProjectivePlane, path) -> bool:
    l1, p1, m, r, l2 = path
    inc = plane.incident
    return ((p1, l1) in inc and (p1, m) in inc and m != l1 and (r, m) in inc
            and r != p1 and (r, l2) in inc and l2 != m)


def verify_geometric_relations(q: int, samples: int = 4, seed: int = 0) -> GeometricReport:
    plane = projective_plane(q)
    n = len(plane.flags)
    P, L = relation_spans(q)
    one = identity_relation(n)
    quad_P = compose_relations(P, P) == P.times(q - 1) + one.times(q)
    quad_L = compose_relations(L, L) == L.times(q - 1) + one.times(q)
    plp = compose_relations(P, compose_relations(L, P))
    lpl = compose_relations(L, compose_relations(P, L))
    braid = plp == lpl

    idx = plane.flag_index
    plp_all = list(plp_paths(plane))
    lpl_all = set(lpl_paths(plane))
    images = set()
    bij = True
    for path in plp_all:
        img = yang_baxter(plane, path)
        if (not _valid_lpl(plane, img) or _path_ends_lpl(img) != _path_ends_plp(path)
                or yang_baxter_inverse(plane, img) != path):
            bij = False
            break
        images.add(img)
    bij = bij and images == lpl_all and len(images) == len(plp_all)
    # the path count on each fiber must match the composed multiplicities
    if bij:
        fiber = Counter((idx[a], idx[b]) for a, b in map(_path_ends_plp, plp_all))
        bij = +fiber == +plp.pairs

    rng = random.Random(seed)
    equiv = True
    for _ in range(samples):
        m = random_sl3(q, rng)
        minv = _inverse3(m, q)
        pt = [plane.point_index[normalize(_apply(m, v, q), q)] for v in plane.points]
        ln = [plane.line_index[normalize(_apply_right(w, minv, q), q)] for w in plane.lines]
        for path in rng.sample(plp_all, min(50, len(plp_all))):
            p1, l1, p2, l2, p3 = path
            moved = (pt[p1], ln[l1], pt[p2], ln[l2], pt[p3])
            a = yang_baxter(plane, moved)
            l1b, p1b, mb, rb, l2b = yang_baxter(plane, path)
            if a != (ln[l1b], pt[p1b], ln[mb], pt[rb], ln[l2b]):
                equiv = False
    return GeometricReport(q, n, quad_P, quad_L, braid, bij, equiv, len(plp_all))


# ---------------------------------------------------------------------------
# the algebra from the multiplication span


@dataclass
class HeckeAlgebraData:
    q: int
    labels: tuple[str, ...]
    constants: list[list[list[Fraction]]]    # c[a][b][w]: T_a T_b = Σ_w c T_w
    raw: list[list[list[Fraction]]]          # same product in the class-indicator basis
    scales: list[Fraction]                    # T_w = scales[w] · (indicator of class w)

    def product(self, x: list[Fraction], y: list[Fraction]) -> list[Fraction]:
        d = len(self.labels)
        out = [Fraction(0)] * d
        for a in range(d):
            if not x[a]:
                continue
            for b in range(d):
                if not y[b]:
                    continue
                for w in range(d):
                    out[w] += x[a] * y[b] * self.constants[a][b][w]
        return out

    def basis(self, label: str) -> list[Fraction]:
        return [Fraction(int(w == label)) for w in self.labels]

    def to_json(self) -> dict:
        return {"q": self.q, "basis": list(self.labels),
                "constants": [[[frac_str(c) for c in row] for row in m] for m in self.constants]}


def _tuple_action(group, perms: list[list[int]], n: int, k: int) -> GroupAction:
    """Diagonal action on k-tuples of flags encoded base n."""
    def act(g: int, s: int) -> int:
        pm = perms[g]
        out = 0
        mult = 1
        for _ in range(k):
            s, r = divmod(s, n)
            out += pm[r] * mult
            mult *= n
        return out
    return GroupAction(group, n ** k, act)


def hecke_from_action(q: int, group, perms: list[list[int]], n: int,
                      labels: tuple[str, ...], label_of) -> HeckeAlgebraData:
    """Degroupoidify the span (X³)//G → (X²)//G × (X²)//G, (X²)//G.

    ``label_of(a, b)`` names the orbit of the flag pair (a, b).
    """
    X2 = ActionGroupoid(_tuple_action(group, perms, n, 2))
    X3 = ActionGroupoid(_tuple_action(group, perms, n, 3))
    D = ProductGroupoid(X2, X2)
    nn = n * n

    # tuples are stored little-endian: s = f1 + f2·n + f3·n²
    def right_ob(s: int) -> int:
        f1, rest = s % n, s // n
        f2, f3 = rest % n, rest // n
        return D.pair(f1 + f2 * n, f2 + f3 * n)

    def right_mor(m: int) -> int:
        g, s = X3.split(m)
        i, j = divmod(right_ob(s), nn)
        return D.morphism(X2.morphism(g, i), X2.morphism(g, j))

    def left_ob(s: int) -> int:
        return s % n + (s // (n * n)) * n

    def left_mor(m: int) -> int:
        g, s = X3.split(m)
        return X2.morphism(g, left_ob(s))

    span = Span(X3, Functor(X3, X2, left_ob, left_mor), Functor(X3, D, right_ob, right_mor))
    M = matrix(span)

    d = len(labels)
    pos = {w: i for i, w in enumerate(labels)}
    # basis position of each X2 class, via its representative pair
    cls_pos = [pos[label_of(r % n, r // n)] for r in X2.classes.reps]
    if sorted(cls_pos) != list(range(d)):
        raise AssertionError("orbits of flag pairs do not match the basis labels")

    # T_w is the vector of the orbit w as a groupoid over (X×X)//G
    scales = [Fraction(0)] * d
    for k, r in enumerate(X2.classes.reps):
        sub = FullSubgroupoid(X2, X2.classes.members(k))
        over = GroupoidOver(sub, X2, sub.inclusion)
        scales[cls_pos[k]] = vector(over).entries[k]

    raw = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    consts = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    nc = len(X2.classes)
    for ka in range(nc):
        for kb in range(nc):
            col = ka * nc + kb
            a, b = cls_pos[ka], cls_pos[kb]
            for kw in range(nc):
                w = cls_pos[kw]
                val = M[kw, col]
                raw[a][b][w] = val
                consts[a][b][w] = val * scales[a] * scales[b] / scales[w]
    return HeckeAlgebraData(q, labels, consts, raw, scales)


def hecke_algebra(q: int) -> HeckeAlgebraData:
    plane = projective_plane(q)
    F = plane.flags
    return hecke_from_action(q, sl3_group(q), flag_perms(q), len(F), A2_BASIS,
                             lambda a, b: relative_position(plane, F[a], F[b]))


def a1_algebra(q: int) -> HeckeAlgebraData:
    """SL(2, q) on the q+1 points of the projective line."""
    PrimeField(q)
    pts = sorted({normalize(v, q) for v in itertools.product(range(q), repeat=2) if any(v)})
    index = {v: i for i, v in enumerate(pts)}
    ident = (1, 0, 0, 1)
    mats = [m for m in itertools.product(range(q), repeat=4)
            if (m[0] * m[3] - m[1] * m[2]) % q == 1 and m != ident]

    def mul2(x, y):
        return ((x[0] * y[0] + x[1] * y[2]) % q, (x[0] * y[1] + x[1] * y[3]) % q,
                (x[2] * y[0] + x[3] * y[2]) % q, (x[2] * y[1] + x[3] * y[3]) % q)

    group = ElementGroup([ident] + mats, mul2)
    perms = [[index[normalize(((m[0] * v[0] + m[1] * v[1]) % q,
                               (m[2] * v[0] + m[3] * v[1]) % q), q)] for v in pts]
             for m in group.items]
    return hecke_from_action(q, group, perms, len(pts), ("1", "s"),
                             lambda a, b: "1" if a == b else "s")


# ---------------------------------------------------------------------------
# checks on structure constants


def _lin(alg: HeckeAlgebraData, coeffs: dict[str, int]) -> list[Fraction]:
    return [Fraction(coeffs.get(w, 0)) for w in alg.labels]


def quadratic_holds(alg: HeckeAlgebraData, gen: str) -> bool:
    """T² = (q−1)T + q·1."""
    T = alg.basis(gen)
    return alg.product(T, T) == _lin(alg, {gen: alg.q - 1, "1": alg.q})


def braid_holds(alg: HeckeAlgebraData) -> bool:
    P, L = alg.basis("P"), alg.basis("L")
    return alg.product(alg.product(P, L), P) == alg.product(alg.product(L, P), L)


def unit_holds(alg: HeckeAlgebraData) -> bool:
    one = alg.basis("1")
    return all(alg.product(one, alg.basis(w)) == alg.basis(w) == alg.product(alg.basis(w), one)
               for w in alg.labels)


def associative(alg: HeckeAlgebraData) -> bool:
    B = [alg.basis(w) for w in alg.labels]
    return all(alg.product(alg.product(x, y), z) == alg.product(x, alg.product(y, z))
               for x in B for y in B for z in B)


def integral(alg: HeckeAlgebraData) -> bool:
    return all(c.denominator == 1 for m in alg.constants for row in m for c in row)


def relation_constants(q: int) -> list[list[list[int]]]:
    """Structure constants from path counting: c[a][b][w] is the number of
    middle flags f2 with (f1, f2) in a and (f2, f3) in b, for any (f1, f3) in w."""
    plane = projective_plane(q)
    F = plane.flags
    n = len(F)
    pos = {w: i for i, w in enumerate(A2_BASIS)}
    rels = [RelationSpan(n, Counter()) for _ in A2_BASIS]
    for a in range(n):
        for b in range(n):
            rels[pos[relative_position(plane, F[a], F[b])]].pairs[a, b] = 1
    rep = {}
    for a in range(n):
        for b in range(n):
            rep.setdefault(pos[relative_position(plane, F[a], F[b])], (a, b))
    d = len(A2_BASIS)
    out = [[[0] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            comp = compose_relations(rels[j], rels[i])
            counts: dict[int, set[int]] = {}
            for pair in itertools.product(range(n), repeat=2):
                w = pos[relative_position(plane, F[pair[0]], F[pair[1]])]
                counts.setdefault(w, set()).add(comp.pairs.get(pair, 0))
            for w in range(d):
                vals = counts[w]
                if len(vals) != 1:
                    raise AssertionError("path counts vary inside an orbit")
                out[i][j][w] = vals.pop()
    return out


@dataclass
class HeckeReport:
    q: int
    flags: int
    plane_ok: bool
    geometry: GeometricReport
    orbits: OrbitData
    algebra: HeckeAlgebraData | None
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return self.plane_ok and self.geometry.ok and all(self.checks.values())

    def to_json(self) -> dict:
        out = {"q": self.q, "flags": self.flags, "plane_ok": self.plane_ok,
               "geometry": self.geometry.to_json(), "orbits": self.orbits.to_json(),
               "checks": dict(sorted(self.checks.items())), "ok": self.ok}
        if self.algebra is not None:
            out["algebra"] = self.algebra.to_json()
        return out


def verify_hecke(q: int) -> HeckeReport:
    plane = projective_plane(q)
    geo = verify_geometric_relations(q)
    orb = sl3_orbits(q)
    checks = {"six_orbits": len([s for s in orb.sizes if s]) == 6}
    if orb.enumerated:
        checks["orbit_routes_agree"] = bool(orb.routes_agree)
    alg = None
    if q <= config.GROUP_ENUM_MAX_Q:
        alg = hecke_algebra(q)
        checks.update({
            "quadratic_P": quadratic_holds(alg, "P"),
            "quadratic_L": quadratic_holds(alg, "L"),
            "braid": braid_holds(alg),
            "unit": unit_holds(alg),
            "associative": associative(alg),
            "integral": integral(alg),
            "matches_path_counts": [[[int(c) for c in row] for row in m]
                                    for m in alg.constants] == relation_constants(q),
        })
    return HeckeReport(q, len(plane.flags), plane.verify().ok, geo, orb, alg, checks)
