"""
Finite groupoids, functors and natural isomorphisms.

Objects and morphisms are dense integer ids.  ``Groupoid`` is the common
interface; ``FiniteGroupoid`` stores explicit tables (the JSON form), while
the other implementations compute morphism ids arithmetically so that
groupoids with millions of morphisms (action groupoids of SL(3, q) on flag
triples, truncations of the groupoid of finite sets) never materialize
their composition tables.
"""

from __future__ import annotations

import bisect
import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import GroupoidError, StructureError, UnknownObjectError
from .groups import FiniteGroup, small_generating_set


@dataclass
class ValidationReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, *witness) -> None:
        self.violations.append((axiom, tuple(witness)))

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for name, wit in other.violations:
            self.violations.append((prefix + name, wit))

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "violations": [{"axiom": a, "witness": list(w)} for a, w in self.violations]}


# ---------------------------------------------------------------------------
# isomorphism classes


class IsoClasses:
    """Partition of a groupoid's objects into isomorphism classes.

    Classes are numbered by ascending representative, and the representative
    is the least object id in the class.
    """

    def __init__(self, class_of: Sequence[int]):
        # relabel so class numbers follow ascending least member
        relabel: dict[int, int] = {}
        self._members: list[list[int]] = []
        self._index = [0] * len(class_of)
        for x, c in enumerate(class_of):
            k = relabel.get(c)
            if k is None:
                k = relabel[c] = len(self._members)
                self._members.append([])
            self._members[k].append(x)
            self._index[x] = k
        self.reps = [m[0] for m in self._members]

    def __len__(self) -> int:
        return len(self.reps)

    def index(self, x: int) -> int:
        return self._index[x]

    def rep_of(self, x: int) -> int:
        return self.reps[self._index[x]]

    def members(self, k: int) -> list[int]:
        return self._members[k]

    def size(self, k: int) -> int:
        return len(self._members[k])

    def partition(self) -> list[list[int]]:
        return [list(m) for m in self._members]


class ProductClasses(IsoClasses):
    """Classes of ``G × H``: pairs of classes, computed without listing pairs."""

    def __init__(self, left: IsoClasses, right: IsoClasses, n_right: int):
        self.left, self.right, self.n_right = left, right, n_right
        self.reps = [a * n_right + b for a in left.reps for b in right.reps]

    def __len__(self) -> int:
        return len(self.left) * len(self.right)

    def index(self, x: int) -> int:
        i, j = divmod(x, self.n_right)
        return self.left.index(i) * len(self.right) + self.right.index(j)

    def rep_of(self, x: int) -> int:
        return self.reps[self.index(x)]

    def members(self, k: int) -> list[int]:
        a, b = divmod(k, len(self.right))
        return [i * self.n_right + j
                for i in self.left.members(a) for j in self.right.members(b)]

    def size(self, k: int) -> int:
        a, b = divmod(k, len(self.right))
        return self.left.size(a) * self.right.size(b)

    def partition(self) -> list[list[int]]:
        return [self.members(k) for k in range(len(self))]


def _union_find_classes(n: int, edges) -> IsoClasses:
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return IsoClasses([find(x) for x in range(n)])


# ---------------------------------------------------------------------------
# groupoid interface


class Groupoid:
    """A finite groupoid on objects ``0..num_objects-1``.

    Subclasses provide source/target/identity/inverse/compose and ``out``
    (all morphisms with a given source).  ``generators(x)`` may return any
    set of morphisms out of ``x`` such that the generators of all objects
    generate every morphism; iso classes and connecting paths are found by
    walking them.
    """

    num_objects: int = 0

    @property
    def objects(self) -> range:
        return range(self.num_objects)

    def num_morphisms(self) -> int:
        raise NotImplementedError

    def morphisms(self) -> range:
        return range(self.num_morphisms())

    def source(self, m: int) -> int:
        raise NotImplementedError

    def target(self, m: int) -> int:
        raise NotImplementedError

    def identity(self, x: int) -> int:
        raise NotImplementedError

    def inverse(self, m: int) -> int:
        raise NotImplementedError

    def compose(self, g: int, f: int) -> int:
        """g∘f, defined when target(f) == source(g)."""
        raise NotImplementedError

    def out(self, x: int) -> Sequence[int]:
        raise NotImplementedError

    def out_degree(self, x: int) -> int:
        return len(self.out(x))

    def out_index(self, x: int, m: int) -> int:
        """Position of ``m`` inside ``out(x)``."""
        cache = self.__dict__.setdefault("_out_index_cache", {})
        table = cache.get(x)
        if table is None:
            table = cache[x] = {mm: i for i, mm in enumerate(self.out(x))}
        return table[m]

    def hom(self, x: int, y: int) -> list[int]:
        if self.classes.index(x) != self.classes.index(y):
            return []
        return [m for m in self.out(x) if self.target(m) == y]

    def aut_order(self, x: int) -> int:
        return len(self.hom(x, x))

    def generators(self, x: int) -> Sequence[int]:
        return self.out(x)

    def check_object(self, x: int) -> None:
        if not (isinstance(x, int) and 0 <= x < self.num_objects):
            raise UnknownObjectError(f"unknown object id {x!r}")

    @cached_property
    def classes(self) -> IsoClasses:
        return self._compute_classes()

    def _compute_classes(self) -> IsoClasses:
        def edges():
            for x in self.objects:
                for g in self.generators(x):
                    yield x, self.target(g)
        return _union_find_classes(self.num_objects, edges())

    @cached_property
    def _paths(self) -> dict[int, int]:
        """For every object x, a morphism rep(x) -> x (identity on reps)."""
        paths: dict[int, int] = {}
        classes = self.classes
        for k in range(len(classes)):
            members = classes.members(k)
            rep = members[0]
            paths[rep] = self.identity(rep)
            if len(members) == 1:
                continue
            adj: dict[int, list[tuple[int, int, bool]]] = {y: [] for y in members}
            for y in members:
                for g in self.generators(y):
                    z = self.target(g)
                    if z != y:
                        adj[y].append((z, g, True))
                        adj[z].append((y, g, False))
            frontier = [rep]
            while frontier:
                nxt = []
                for y in frontier:
                    for z, g, forward in adj[y]:
                        if z in paths:
                            continue
                        step = g if forward else self.inverse(g)
                        paths[z] = self.compose(step, paths[y])
                        nxt.append(z)
                frontier = nxt
        return paths

    def path_from_rep(self, x: int) -> int:
        return self._paths[x]

    def __repr__(self) -> str:
        return f"<{type(self).__name__} objects={self.num_objects}>"


# ---------------------------------------------------------------------------
# explicit tables


class FiniteGroupoid(Groupoid):
    """Groupoid stored as explicit tables.

    ``compose`` maps pairs ``(g, f)`` to ``g∘f``.  Construction only checks
    that every id resolves; the groupoid axioms are checked by
    :func:`validate_groupoid`.
    """

    def __init__(self, num_objects: int, src: Sequence[int], tgt: Sequence[int],
                 identity: Sequence[int], inverse: Sequence[int],
                 compose: dict[tuple[int, int], int]):
        n_mor = len(src)
        if len(tgt) != n_mor or len(inverse) != n_mor:
            raise StructureError("source/target/inverse tables differ in length")
        if len(identity) != num_objects:
            raise StructureError("identity table must cover every object")
        for m in range(n_mor):
            if not (0 <= src[m] < num_objects and 0 <= tgt[m] < num_objects):
                raise StructureError(f"morphism {m} has an unresolved endpoint")
            if not 0 <= inverse[m] < n_mor:
                raise StructureError(f"inverse of morphism {m} does not resolve")
        for x, i in enumerate(identity):
            if not 0 <= i < n_mor:
                raise StructureError(f"identity of object {x} does not resolve")
        for (g, f), h in compose.items():
            if not (0 <= g < n_mor and 0 <= f < n_mor and 0 <= h < n_mor):
                raise StructureError(f"composition entry {(g, f, h)} does not resolve")
        self.num_objects = num_objects
        self.src = list(src)
        self.tgt = list(tgt)
        self.ident = list(identity)
        self.inv = list(inverse)
        self.table = dict(compose)
        self._out: list[list[int]] = [[] for _ in range(num_objects)]
        for m in range(n_mor):
            self._out[self.src[m]].append(m)

    def num_morphisms(self) -> int:
        return len(self.src)

    def source(self, m: int) -> int:
        return self.src[m]

    def target(self, m: int) -> int:
        return self.tgt[m]

    def identity(self, x: int) -> int:
        return self.ident[x]

    def inverse(self, m: int) -> int:
        return self.inv[m]

    def compose(self, g: int, f: int) -> int:
        try:
            return self.table[g, f]
        except KeyError:
            raise GroupoidError(f"composite of {g} after {f} is not defined") from None

    def out(self, x: int) -> list[int]:
        return self._out[x]

    def hom(self, x: int, y: int) -> list[int]:
        return [m for m in self._out[x] if self.tgt[m] == y]


def materialize(G: Groupoid) -> FiniteGroupoid:
    """Explicit-table copy of any groupoid (exhaustive; small inputs only)."""
    n_mor = G.num_morphisms()
    src = [G.source(m) for m in range(n_mor)]
    tgt = [G.target(m) for m in range(n_mor)]
    incoming: list[list[int]] = [[] for _ in G.objects]
    for m in range(n_mor):
        incoming[tgt[m]].append(m)
    table = {}
    for y in G.objects:
        for f in incoming[y]:
            for g in G.out(y):
                table[g, f] = G.compose(g, f)
    return FiniteGroupoid(G.num_objects, src, tgt,
                          [G.identity(x) for x in G.objects],
                          [G.inverse(m) for m in range(n_mor)], table)


def discrete(n: int) -> FiniteGroupoid:
    return FiniteGroupoid(n, list(range(n)), list(range(n)), list(range(n)),
                          list(range(n)), {(i, i): i for i in range(n)})


def terminal() -> FiniteGroupoid:
    return discrete(1)


def empty() -> FiniteGroupoid:
    return discrete(0)


def codiscrete(n: int) -> FiniteGroupoid:
    """Exactly one morphism between any two of ``n`` objects."""
    mid = lambda i, j: i * n + j  # noqa: E731
    src, tgt = [], []
    for i in range(n):
        for j in range(n):
            src.append(i)
            tgt.append(j)
    table = {(mid(j, k), mid(i, j)): mid(i, k)
             for i in range(n) for j in range(n) for k in range(n)}
    return FiniteGroupoid(n, src, tgt, [mid(i, i) for i in range(n)],
                          [mid(j, i) for i in range(n) for j in range(n)], table)


# ---------------------------------------------------------------------------
# structured implementations


class SkeletalGroupoid(Groupoid):
    """Disjoint union of one-object groupoids ``1//G_x``.

    Morphism ``offset[x] + g`` is group element ``g`` of object ``x``.
    """

    def __init__(self, groups: Sequence[FiniteGroup]):
        self.groups = list(groups)
        self.num_objects = len(self.groups)
        self.offsets = [0]
        for grp in self.groups:
            self.offsets.append(self.offsets[-1] + grp.order)

    def num_morphisms(self) -> int:
        return self.offsets[-1]

    def source(self, m: int) -> int:
        return bisect.bisect_right(self.offsets, m) - 1

    target = source

    def element(self, m: int) -> tuple[int, int]:
        x = self.source(m)
        return x, m - self.offsets[x]

    def morphism(self, x: int, g: int) -> int:
        return self.offsets[x] + g

    def identity(self, x: int) -> int:
        return self.offsets[x] + self.groups[x].identity

    def inverse(self, m: int) -> int:
        x, g = self.element(m)
        return self.offsets[x] + self.groups[x].inv(g)

    def compose(self, g: int, f: int) -> int:
        offs = self.offsets
        x = bisect.bisect_right(offs, g) - 1
        off = offs[x]
        if not off <= f < offs[x + 1]:
            raise GroupoidError(f"composite of {g} after {f} is not defined")
        return off + self.groups[x].mul(g - off, f - off)

    def out(self, x: int) -> range:
        return range(self.offsets[x], self.offsets[x + 1])

    def out_degree(self, x: int) -> int:
        return self.groups[x].order

    def out_index(self, x: int, m: int) -> int:
        return m - self.offsets[x]

    def hom(self, x: int, y: int) -> list[int]:
        return list(self.out(x)) if x == y else []

    def aut_order(self, x: int) -> int:
        return self.groups[x].order

    def generators(self, x: int) -> list[int]:
        return [self.offsets[x] + g for g in self.groups[x].generators]

    def _compute_classes(self) -> IsoClasses:
        return IsoClasses(list(range(self.num_objects)))

    @cached_property
    def _paths(self) -> dict[int, int]:
        return {x: self.identity(x) for x in self.objects}


def one_object(group: FiniteGroup) -> SkeletalGroupoid:
    """The groupoid 1//G."""
    return SkeletalGroupoid([group])


@dataclass(frozen=True)
class GroupAction:
    """A finite group acting on the carrier ``{0..size-1}`` from the left."""

    group: FiniteGroup
    size: int
    act: Callable[[int, int], int]

    @classmethod
    def from_tables(cls, mult: Sequence[Sequence[int]], inverse: Sequence[int],
                    identity: int, action: Sequence[Sequence[int]]) -> "GroupAction":
        from .groups import TableGroup
        group = TableGroup(mult, identity=identity, inverse=inverse)
        size = len(action[0]) if action else 0
        table = [list(row) for row in action]
        if len(table) != group.order or any(len(r) != size for r in table):
            raise StructureError("action table must be |G| x |carrier|")
        if any(not 0 <= v < size for r in table for v in r):
            raise StructureError("action table entry out of range")
        return cls(group, size, lambda g, s: table[g][s])


def validate_action(action: GroupAction) -> ValidationReport:
    from .groups import TableGroup
    report = ValidationReport()
    grp = action.group
    if isinstance(grp, TableGroup):
        for name, wit in grp.violations():
            report.add("group_" + name, *wit)
    for s in range(action.size):
        if action.act(grp.identity, s) != s:
            report.add("action_unit", s)
    for g in grp.elements():
        for h in grp.elements():
            gh = grp.mul(g, h)
            for s in range(action.size):
                if action.act(gh, s) != action.act(g, action.act(h, s)):
                    report.add("action_compatibility", g, h, s)
                    return report
    return report


class ActionGroupoid(Groupoid):
    """Weak quotient S//G: morphism ``g*|S| + s`` is ``g: s -> g·s``."""

    def __init__(self, action: GroupAction):
        self.action = action
        self.group = action.group
        self.num_objects = action.size

    def num_morphisms(self) -> int:
        return self.group.order * self.num_objects

    def split(self, m: int) -> tuple[int, int]:
        return divmod(m, self.num_objects)

    def morphism(self, g: int, s: int) -> int:
        return g * self.num_objects + s

    def source(self, m: int) -> int:
        return m % self.num_objects

    def target(self, m: int) -> int:
        g, s = divmod(m, self.num_objects)
        return self.action.act(g, s)

    def identity(self, x: int) -> int:
        return self.morphism(self.group.identity, x)

    def inverse(self, m: int) -> int:
        g, s = self.split(m)
        return self.morphism(self.group.inv(g), self.action.act(g, s))

    def compose(self, g: int, f: int) -> int:
        a, t = self.split(g)
        b, s = self.split(f)
        if self.action.act(b, s) != t:
            raise GroupoidError(f"composite of {g} after {f} is not defined")
        return self.morphism(self.group.mul(a, b), s)

    def out(self, x: int) -> list[int]:
        n = self.num_objects
        return [g * n + x for g in self.group.elements()]

    def out_degree(self, x: int) -> int:
        return self.group.order

    def out_index(self, x: int, m: int) -> int:
        return m // self.num_objects

    def hom(self, x: int, y: int) -> list[int]:
        act, n = self.action.act, self.num_objects
        return [g * n + x for g in self.group.elements() if act(g, x) == y]

    def aut_order(self, x: int) -> int:
        # orbit-stabilizer
        return self.group.order // self.classes.size(self.classes.index(x))

    def generators(self, x: int) -> list[int]:
        n = self.num_objects
        return [g * n + x for g in self.group.generators]


def action_groupoid(action: GroupAction) -> ActionGroupoid:
    return ActionGroupoid(action)


class ProductGroupoid(Groupoid):
    """G × H; object ``i*|H| + j``, morphism ``f*#Mor(H) + g``."""

    def __init__(self, left: Groupoid, right: Groupoid):
        self.left, self.right = left, right
        self.num_objects = left.num_objects * right.num_objects
        self._nh = right.num_objects
        self._mh = right.num_morphisms()

    def num_morphisms(self) -> int:
        return self.left.num_morphisms() * self._mh

    def pair(self, i: int, j: int) -> int:
        return i * self._nh + j

    def split_object(self, x: int) -> tuple[int, int]:
        return divmod(x, self._nh)

    def split(self, m: int) -> tuple[int, int]:
        return divmod(m, self._mh)

    def morphism(self, f: int, g: int) -> int:
        return f * self._mh + g

    def source(self, m: int) -> int:
        f, g = self.split(m)
        return self.pair(self.left.source(f), self.right.source(g))

    def target(self, m: int) -> int:
        f, g = self.split(m)
        return self.pair(self.left.target(f), self.right.target(g))

    def identity(self, x: int) -> int:
        i, j = self.split_object(x)
        return self.morphism(self.left.identity(i), self.right.identity(j))

    def inverse(self, m: int) -> int:
        f, g = self.split(m)
        return self.morphism(self.left.inverse(f), self.right.inverse(g))

    def compose(self, a: int, b: int) -> int:
        f1, g1 = self.split(a)
        f2, g2 = self.split(b)
        return self.morphism(self.left.compose(f1, f2), self.right.compose(g1, g2))

    def out(self, x: int) -> list[int]:
        i, j = self.split_object(x)
        right_out = self.right.out(j)
        return [self.morphism(f, g) for f in self.left.out(i) for g in right_out]

    def out_degree(self, x: int) -> int:
        i, j = self.split_object(x)
        return self.left.out_degree(i) * self.right.out_degree(j)

    def hom(self, x: int, y: int) -> list[int]:
        i, j = self.split_object(x)
        k, l = self.split_object(y)
        rh = self.right.hom(j, l)
        return [self.morphism(f, g) for f in self.left.hom(i, k) for g in rh]

    def aut_order(self, x: int) -> int:
        i, j = self.split_object(x)
        return self.left.aut_order(i) * self.right.aut_order(j)

    def generators(self, x: int) -> list[int]:
        i, j = self.split_object(x)
        idl, idr = self.left.identity(i), self.right.identity(j)
        return ([self.morphism(f, idr) for f in self.left.generators(i)]
                + [self.morphism(idl, g) for g in self.right.generators(j)])

    def _compute_classes(self) -> IsoClasses:
        return ProductClasses(self.left.classes, self.right.classes, self._nh)

    @cached_property
    def _paths(self) -> dict[int, int]:
        return _LazyPaths(self)

    @cached_property
    def projections(self) -> tuple["Functor", "Functor"]:
        p1 = Functor(self, self.left, lambda x: x // self._nh, lambda m: m // self._mh)
        p2 = Functor(self, self.right, lambda x: x % self._nh, lambda m: m % self._mh)
        return p1, p2


class _LazyPaths(dict):
    """Connecting morphisms of a product, built from the factors on demand."""

    def __init__(self, P: ProductGroupoid):
        super().__init__()
        self.P = P

    def __missing__(self, x: int) -> int:
        i, j = self.P.split_object(x)
        m = self.P.morphism(self.P.left.path_from_rep(i), self.P.right.path_from_rep(j))
        self[x] = m
        return m


def product(G: Groupoid, H: Groupoid) -> tuple[ProductGroupoid, "Functor", "Functor"]:
    P = ProductGroupoid(G, H)
    return (P, *P.projections)


class CoproductGroupoid(Groupoid):
    """G + H with G's ids first and H's ids shifted."""

    def __init__(self, left: Groupoid, right: Groupoid):
        self.left, self.right = left, right
        self.no = left.num_objects
        self.nm = left.num_morphisms()
        self.num_objects = self.no + right.num_objects

    def num_morphisms(self) -> int:
        return self.nm + self.right.num_morphisms()

    def _side(self, m: int) -> tuple[Groupoid, int, int, int]:
        if m < self.nm:
            return self.left, m, 0, 0
        return self.right, m - self.nm, self.no, self.nm

    def _oside(self, x: int) -> tuple[Groupoid, int, int, int]:
        if x < self.no:
            return self.left, x, 0, 0
        return self.right, x - self.no, self.no, self.nm

    def source(self, m: int) -> int:
        G, mm, oo, _ = self._side(m)
        return G.source(mm) + oo

    def target(self, m: int) -> int:
        G, mm, oo, _ = self._side(m)
        return G.target(mm) + oo

    def identity(self, x: int) -> int:
        G, xx, _, om = self._oside(x)
        return G.identity(xx) + om

    def inverse(self, m: int) -> int:
        G, mm, _, om = self._side(m)
        return G.inverse(mm) + om

    def compose(self, g: int, f: int) -> int:
        G, gg, _, om = self._side(g)
        H, ff, _, _ = self._side(f)
        if G is not H:
            raise GroupoidError(f"composite of {g} after {f} is not defined")
        return G.compose(gg, ff) + om

    def out(self, x: int) -> list[int]:
        G, xx, _, om = self._oside(x)
        return [m + om for m in G.out(xx)]

    def out_degree(self, x: int) -> int:
        G, xx, _, _ = self._oside(x)
        return G.out_degree(xx)

    def hom(self, x: int, y: int) -> list[int]:
        G, xx, _, om = self._oside(x)
        H, yy, _, _ = self._oside(y)
        if G is not H:
            return []
        return [m + om for m in G.hom(xx, yy)]

    def aut_order(self, x: int) -> int:
        G, xx, _, _ = self._oside(x)
        return G.aut_order(xx)

    def generators(self, x: int) -> list[int]:
        G, xx, _, om = self._oside(x)
        return [m + om for m in G.generators(xx)]

    def _compute_classes(self) -> IsoClasses:
        lc, rc = self.left.classes, self.right.classes
        labels = [lc.index(x) for x in self.left.objects]
        labels += [len(lc) + rc.index(x) for x in self.right.objects]
        return IsoClasses(labels)

    def path_from_rep(self, x: int) -> int:
        G, xx, _, om = self._oside(x)
        return G.path_from_rep(xx) + om

    @cached_property
    def injections(self) -> tuple["Functor", "Functor"]:
        i1 = Functor(self.left, self, lambda x: x, lambda m: m)
        i2 = Functor(self.right, self, lambda x: x + self.no, lambda m: m + self.nm)
        return i1, i2


def coproduct(G: Groupoid, H: Groupoid) -> tuple[CoproductGroupoid, "Functor", "Functor"]:
    C = CoproductGroupoid(G, H)
    return (C, *C.injections)


class _AutGroup(FiniteGroup):
    """Aut(x) of a groupoid viewed as a group on positions in ``hom(x, x)``."""

    def __init__(self, G: Groupoid, x: int):
        self.G = G
        self.items = G.hom(x, x)
        ident = G.identity(x)
        self.items.remove(ident)
        self.items.insert(0, ident)
        self.pos = {m: i for i, m in enumerate(self.items)}

    @property
    def order(self) -> int:
        return len(self.items)

    def mul(self, g: int, h: int) -> int:
        return self.pos[self.G.compose(self.items[g], self.items[h])]

    def inv(self, g: int) -> int:
        return self.pos[self.G.inverse(self.items[g])]


def aut_generators(G: Groupoid, x: int) -> list[int]:
    """A small generating set of Aut(x), as morphism ids."""
    grp = _AutGroup(G, x)
    return [grp.items[i] for i in small_generating_set(grp)]


class FullSubgroupoid(Groupoid):
    """Full subgroupoid of ``parent`` on a set of its objects.

    Local object ``i`` is ``objects[i]`` (ascending).  Morphism tables are
    only built if a caller enumerates morphisms; classes and automorphism
    counts come straight from the parent.
    """

    def __init__(self, parent: Groupoid, objects: Sequence[int]):
        self.parent = parent
        self.objs = sorted(set(objects))
        self.local = {x: i for i, x in enumerate(self.objs)}
        self.num_objects = len(self.objs)

    @cached_property
    def _mor(self) -> tuple[list[int], dict[int, int], list[list[int]]]:
        P = self.parent
        by_class: dict[int, list[int]] = {}
        for x in self.objs:
            by_class.setdefault(P.classes.index(x), []).append(x)
        mors: list[int] = []
        out: list[list[int]] = [[] for _ in self.objs]
        for x in self.objs:
            for y in by_class[P.classes.index(x)]:
                for m in P.hom(x, y):
                    out[self.local[x]].append(len(mors))
                    mors.append(m)
        return mors, {m: i for i, m in enumerate(mors)}, out

    def num_morphisms(self) -> int:
        return len(self._mor[0])

    def to_parent(self, m: int) -> int:
        return self._mor[0][m]

    def from_parent(self, m: int) -> int:
        return self._mor[1][m]

    def source(self, m: int) -> int:
        return self.local[self.parent.source(self._mor[0][m])]

    def target(self, m: int) -> int:
        return self.local[self.parent.target(self._mor[0][m])]

    def identity(self, x: int) -> int:
        return self._mor[1][self.parent.identity(self.objs[x])]

    def inverse(self, m: int) -> int:
        return self._mor[1][self.parent.inverse(self._mor[0][m])]

    def compose(self, g: int, f: int) -> int:
        mors, back, _ = self._mor
        return back[self.parent.compose(mors[g], mors[f])]

    def out(self, x: int) -> list[int]:
        return self._mor[2][x]

    def out_degree(self, x: int) -> int:
        return len(self._mor[2][x])

    def hom(self, x: int, y: int) -> list[int]:
        back = self._mor[1]
        return [back[m] for m in self.parent.hom(self.objs[x], self.objs[y])]

    def aut_order(self, x: int) -> int:
        return self.parent.aut_order(self.objs[x])

    def _compute_classes(self) -> IsoClasses:
        pc = self.parent.classes
        return IsoClasses([pc.index(x) for x in self.objs])

    @cached_property
    def _gens(self) -> list[list[int]]:
        gens: list[list[int]] = [[] for _ in self.objs]
        classes = self.classes
        for k in range(len(classes)):
            members = classes.members(k)
            anchor = members[0]
            gens[anchor] = aut_generators(self, anchor)
            for y in members[1:]:
                link = self.hom(anchor, y)[0]
                gens[anchor].append(link)
                gens[y].append(self.inverse(link))
        return gens

    def generators(self, x: int) -> list[int]:
        return self._gens[x]

    @cached_property
    def inclusion(self) -> "Functor":
        return Functor(self, self.parent, lambda x: self.objs[x], self.to_parent)


# ---------------------------------------------------------------------------
# functors and natural isomorphisms


class Functor:
    """Object and morphism maps between two groupoids.

    Maps are callables or sequences; results may be cached since every
    value here is immutable.
    """

    def __init__(self, source: Groupoid, target: Groupoid,
                 ob: Callable[[int], int] | Sequence[int],
                 mor: Callable[[int], int] | Sequence[int], cache: bool = False):
        self.source, self.target = source, target
        self.ob_table = None if callable(ob) else list(ob)
        self.mor_table = None if callable(mor) else list(mor)
        self._ob = ob if callable(ob) else self.ob_table.__getitem__
        self._mor = mor if callable(mor) else self.mor_table.__getitem__
        self._cache: dict[int, int] | None = {} if cache else None

    def ob(self, x: int) -> int:
        return self._ob(x)

    def mor(self, m: int) -> int:
        if self._cache is None:
            return self._mor(m)
        v = self._cache.get(m)
        if v is None:
            v = self._cache[m] = self._mor(m)
        return v

    def then(self, G: "Functor") -> "Functor":
        """G∘self."""
        return compose_functors(G, self)

    def __repr__(self) -> str:
        return f"<Functor {self.source!r} -> {self.target!r}>"


def identity_functor(G: Groupoid) -> Functor:
    return Functor(G, G, lambda x: x, lambda m: m)


def compose_functors(G: Functor, F: Functor) -> Functor:
    """G∘F."""
    if F.target is not G.source:
        raise GroupoidError("functors are not composable")
    return Functor(F.source, G.target, lambda x: G.ob(F.ob(x)),
                   lambda m: G.mor(F.mor(m)), cache=True)


def constant_functor(source: Groupoid, target: Groupoid, y: int) -> Functor:
    ident = target.identity(y)
    return Functor(source, target, lambda x: y, lambda m: ident)


def validate_functor(F: Functor) -> ValidationReport:
    """Exhaustive check of source/target, identities and composites."""
    report = ValidationReport()
    S, T = F.source, F.target
    for x in S.objects:
        y = F.ob(x)
        if not 0 <= y < T.num_objects:
            report.add("object_map", x)
            return report
        if F.mor(S.identity(x)) != T.identity(y):
            report.add("identity", x)
    for m in S.morphisms():
        fm = F.mor(m)
        if not 0 <= fm < T.num_morphisms():
            report.add("morphism_map", m)
            return report
        if T.source(fm) != F.ob(S.source(m)) or T.target(fm) != F.ob(S.target(m)):
            report.add("endpoints", m)
    if not report.ok:
        return report
    for y in S.objects:
        incoming = [f for x in S.objects for f in S.hom(x, y)]
        for f in incoming:
            for g in S.out(y):
                if F.mor(S.compose(g, f)) != T.compose(F.mor(g), F.mor(f)):
                    report.add("composition", g, f)
    return report


class NaturalIso:
    """Components ``F(x) -> G(x)`` in the common target groupoid."""

    def __init__(self, from_: Functor, to: Functor,
                 components: Callable[[int], int] | Sequence[int]):
        self.from_, self.to = from_, to
        self.table = None if callable(components) else list(components)
        self._c = components if callable(components) else self.table.__getitem__

    def __getitem__(self, x: int) -> int:
        return self._c(x)


def validate_natural_iso(eta: NaturalIso) -> ValidationReport:
    """Components have the right endpoints and every naturality square commutes."""
    report = ValidationReport()
    F, G = eta.from_, eta.to
    if F.source is not G.source or F.target is not G.target:
        report.add("parallel", ())
        return report
    S, T = F.source, F.target
    for x in S.objects:
        c = eta[x]
        if T.source(c) != F.ob(x) or T.target(c) != G.ob(x):
            report.add("component", x)
    if not report.ok:
        return report
    for h in S.morphisms():
        x, y = S.source(h), S.target(h)
        if T.compose(G.mor(h), eta[x]) != T.compose(eta[y], F.mor(h)):
            report.add("naturality", h)
    return report


# ---------------------------------------------------------------------------
# operations


def validate_groupoid(G: Groupoid) -> ValidationReport:
    """Exhaustive check of the groupoid axioms with concrete witnesses."""
    report = ValidationReport()
    incoming: list[list[int]] = [[] for _ in G.objects]
    for m in G.morphisms():
        incoming[G.target(m)].append(m)
    for x in G.objects:
        i = G.identity(x)
        if G.source(i) != x or G.target(i) != x:
            report.add("identity_endpoints", x, i)
    composable_ok = True
    for y in G.objects:
        for f in incoming[y]:
            for g in G.out(y):
                try:
                    gf = G.compose(g, f)
                except GroupoidError:
                    report.add("closure", g, f)
                    composable_ok = False
                    continue
                if G.source(gf) != G.source(f) or G.target(gf) != G.target(g):
                    report.add("closure", g, f, gf)
                    composable_ok = False
    if isinstance(G, FiniteGroupoid):
        for (g, f), _ in G.table.items():
            if G.target(f) != G.source(g):
                report.add("composability", g, f)
    if not composable_ok:
        return report
    for m in G.morphisms():
        s, t = G.source(m), G.target(m)
        if G.compose(m, G.identity(s)) != m or G.compose(G.identity(t), m) != m:
            report.add("unit", m)
        inv = G.inverse(m)
        if G.source(inv) != t or G.target(inv) != s:
            report.add("inverse", m, inv)
            continue
        if G.compose(inv, m) != G.identity(s) or G.compose(m, inv) != G.identity(t):
            report.add("inverse", m, inv)
    for y in G.objects:
        for f in incoming[y]:
            for g in G.out(y):
                z = G.target(g)
                gf = G.compose(g, f)
                for h in G.out(z):
                    if G.compose(h, gf) != G.compose(G.compose(h, g), f):
                        report.add("associativity", h, g, f)
    return report


def iso_classes(G: Groupoid) -> tuple[list[list[int]], dict[int, int]]:
    """Partition of objects into iso classes plus the representative map."""
    c = G.classes
    return c.partition(), {x: c.rep_of(x) for x in G.objects}


def aut_order(G: Groupoid, x: int) -> int:
    G.check_object(x)
    return G.aut_order(x)


def cardinality(G: Groupoid) -> Fraction:
    """Sum over iso classes of 1/|Aut(x)|."""
    return sum((Fraction(1, G.aut_order(r)) for r in G.classes.reps), Fraction(0))


def cardinality_by_sources(G: Groupoid) -> Fraction:
    """Sum over all objects of 1/|Mor(x, -)|."""
    return sum((Fraction(1, G.out_degree(x)) for x in G.objects), Fraction(0))


@dataclass
class Skeleton:
    groupoid: FullSubgroupoid
    inclusion: Functor
    retraction: Functor
    unit: NaturalIso      # inclusion∘retraction ⇒ 1_G
    counit: NaturalIso    # retraction∘inclusion ⇒ 1_skeleton

    def __iter__(self):
        return iter((self.groupoid, self.inclusion, self.retraction, self.unit, self.counit))


def skeleton(G: Groupoid) -> Skeleton:
    """Full subgroupoid on class representatives with equivalence witnesses."""
    reps = G.classes.reps
    Sk = FullSubgroupoid(G, reps)
    incl = Sk.inclusion

    def gamma(x: int) -> int:
        # x -> rep(x)
        return G.inverse(G.path_from_rep(x))

    def r_mor(m: int) -> int:
        x, y = G.source(m), G.target(m)
        inner = G.compose(gamma(y), G.compose(m, G.path_from_rep(x)))
        return Sk.from_parent(inner)

    retr = Functor(G, Sk, lambda x: Sk.local[G.classes.rep_of(x)], r_mor, cache=True)
    unit = NaturalIso(compose_functors(incl, retr), identity_functor(G), G.path_from_rep)
    counit = NaturalIso(compose_functors(retr, incl), identity_functor(Sk), Sk.identity)
    return Skeleton(Sk, incl, retr, unit, counit)


@dataclass
class EquivalenceReport:
    functor_ok: bool
    faithful: bool
    full: bool
    essentially_surjective: bool

    @property
    def equivalence(self) -> bool:
        return self.functor_ok and self.faithful and self.full and self.essentially_surjective

    def to_json(self) -> dict:
        return {"functor_ok": self.functor_ok, "faithful": self.faithful, "full": self.full,
                "essentially_surjective": self.essentially_surjective,
                "equivalence": self.equivalence}


def check_equivalence(F: Functor, validate: bool = True) -> EquivalenceReport:
    """Faithful / full / essentially surjective, each by exhaustion."""
    S, T = F.source, F.target
    functor_ok = validate_functor(F).ok if validate else True
    faithful = full = True
    for x, y in itertools.product(S.objects, repeat=2):
        homs = S.hom(x, y)
        if not homs:
            continue
        images = {F.mor(m) for m in homs}
        if len(images) != len(homs):
            faithful = False
        if len(images) != len(T.hom(F.ob(x), F.ob(y))):
            full = False
        if not (faithful or full):
            break
    hit = {T.classes.index(F.ob(x)) for x in S.objects}
    return EquivalenceReport(functor_ok, faithful, full, len(hit) == len(T.classes))


class DisjointUnion(Groupoid):
    """Disjoint union of several groupoids, ids laid out part after part."""

    def __init__(self, parts: Sequence[Groupoid]):
        self.parts = list(parts)
        self.obj_off = [0]
        self.mor_off = [0]
        for P in self.parts:
            self.obj_off.append(self.obj_off[-1] + P.num_objects)
            self.mor_off.append(self.mor_off[-1] + P.num_morphisms())
        self.num_objects = self.obj_off[-1]

    def num_morphisms(self) -> int:
        return self.mor_off[-1]

    def locate_object(self, x: int) -> tuple[int, int]:
        k = bisect.bisect_right(self.obj_off, x) - 1
        return k, x - self.obj_off[k]

    def locate(self, m: int) -> tuple[int, int]:
        k = bisect.bisect_right(self.mor_off, m) - 1
        return k, m - self.mor_off[k]

    def source(self, m: int) -> int:
        k, mm = self.locate(m)
        return self.parts[k].source(mm) + self.obj_off[k]

    def target(self, m: int) -> int:
        k, mm = self.locate(m)
        return self.parts[k].target(mm) + self.obj_off[k]

    def identity(self, x: int) -> int:
        k, xx = self.locate_object(x)
        return self.parts[k].identity(xx) + self.mor_off[k]

    def inverse(self, m: int) -> int:
        k, mm = self.locate(m)
        return self.parts[k].inverse(mm) + self.mor_off[k]

    def compose(self, g: int, f: int) -> int:
        k, gg = self.locate(g)
        k2, ff = self.locate(f)
        if k != k2:
            raise GroupoidError(f"composite of {g} after {f} is not defined")
        return self.parts[k].compose(gg, ff) + self.mor_off[k]

    def out(self, x: int) -> list[int]:
        k, xx = self.locate_object(x)
        off = self.mor_off[k]
        return [m + off for m in self.parts[k].out(xx)]

    def out_degree(self, x: int) -> int:
        k, xx = self.locate_object(x)
        return self.parts[k].out_degree(xx)

    def out_index(self, x: int, m: int) -> int:
        k, xx = self.locate_object(x)
        return self.parts[k].out_index(xx, m - self.mor_off[k])

    def hom(self, x: int, y: int) -> list[int]:
        k, xx = self.locate_object(x)
        k2, yy = self.locate_object(y)
        if k != k2:
            return []
        off = self.mor_off[k]
        return [m + off for m in self.parts[k].hom(xx, yy)]

    def aut_order(self, x: int) -> int:
        k, xx = self.locate_object(x)
        return self.parts[k].aut_order(xx)

    def generators(self, x: int) -> list[int]:
        k, xx = self.locate_object(x)
        off = self.mor_off[k]
        return [m + off for m in self.parts[k].generators(xx)]

    def _compute_classes(self) -> IsoClasses:
        labels = []
        base = 0
        for P in self.parts:
            pc = P.classes
            labels.extend(base + pc.index(x) for x in P.objects)
            base += len(pc)
        return IsoClasses(labels)

    def path_from_rep(self, x: int) -> int:
        k, xx = self.locate_object(x)
        return self.parts[k].path_from_rep(xx) + self.mor_off[k]
