"""
Finite groups on dense element indices.

Every group here numbers its elements ``0 .. order-1``.  Concrete subclasses
differ only in how elements are stored: an explicit multiplication table,
a list of hashable elements with a multiplication function, or the
symmetric group, whose elements are enumerated only when someone asks.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Hashable, Sequence
from functools import cached_property

from .errors import StructureError


class FiniteGroup:
    """Interface shared by all finite groups.

    ``mul(g, h)`` is the product ``g*h`` (apply ``h`` first when the group
    acts on the left).
    """

    identity: int = 0

    @property
    def order(self) -> int:
        raise NotImplementedError

    def mul(self, g: int, h: int) -> int:
        raise NotImplementedError

    def inv(self, g: int) -> int:
        raise NotImplementedError

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return small_generating_set(self)


def closure(group: FiniteGroup, gens: Sequence[int], start: set[int] | None = None) -> set[int]:
    """Subgroup generated by ``gens`` (optionally grown from a known subgroup)."""
    seen = {group.identity} if start is None else set(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def small_generating_set(group: FiniteGroup, seed: int = 0) -> tuple[int, ...]:
    """Greedy generating set: scan elements in a seeded shuffled order and keep
    every element not already in the subgroup generated so far."""
    n = group.order
    if n == 1:
        return ()
    order = list(range(n))
    random.Random(seed).shuffle(order)
    gens: list[int] = []
    sub = {group.identity}
    for x in order:
        if x in sub:
            continue
        gens.append(x)
        sub = closure(group, gens, sub)
        if len(sub) == n:
            break
    return tuple(gens)


class TableGroup(FiniteGroup):
    """Group given by a full multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0,
                 inverse: Sequence[int] | None = None):
        n = len(table)
        self.table = [list(row) for row in table]
        if any(len(row) != n for row in self.table):
            raise StructureError("multiplication table is not square")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise StructureError("multiplication table entry out of range")
        self.identity = identity
        if inverse is None:
            inverse = []
            for g in range(n):
                hits = [h for h in range(n) if self.table[g][h] == identity]
                inverse.append(hits[0] if hits else -1)
        self.inverse = list(inverse)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def violations(self) -> list[tuple[str, tuple]]:
        """Exhaustive check of the group axioms."""
        n, e, t = self.order, self.identity, self.table
        bad: list[tuple[str, tuple]] = []
        for g in range(n):
            if t[e][g] != g or t[g][e] != g:
                bad.append(("unit", (g,)))
            i = self.inverse[g]
            if not 0 <= i < n or t[g][i] != e or t[i][g] != e:
                bad.append(("inverse", (g,)))
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                bad.append(("associativity", (a, b, c)))
                break
        return bad


class ElementGroup(FiniteGroup):
    """Group whose elements are hashable values multiplied by ``mul_fn``.

    The element list must be closed under ``mul_fn``; index 0 must be the
    identity.
    """

    def __init__(self, elements: Sequence[Hashable],
                 mul_fn: Callable[[Hashable, Hashable], Hashable],
                 gens: Sequence[int] | None = None):
        self.items = list(elements)
        self.index = {e: i for i, e in enumerate(self.items)}
        if len(self.index) != len(self.items):
            raise StructureError("duplicate group elements")
        self.mul_fn = mul_fn
        self._inv: dict[int, int] = {}
        if gens is not None:
            self.__dict__["generators"] = tuple(gens)

    @property
    def order(self) -> int:
        return len(self.items)

    def mul(self, g: int, h: int) -> int:
        return self.index[self.mul_fn(self.items[g], self.items[h])]

    def inv(self, g: int) -> int:
        i = self._inv.get(g)
        if i is None:
            # g has finite order, so walking its powers reaches g^-1
            prev, cur = 0, g
            while cur != 0:
                prev, cur = cur, self.mul(cur, g)
            i = prev
            self._inv[g] = i
            self._inv[i] = g
        return i

    def element(self, g: int) -> Hashable:
        return self.items[g]


def compose_perms(h: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    """h∘g: apply g first."""
    return tuple(h[x] for x in g)


def invert_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class SymmetricGroup(FiniteGroup):
    """S_n acting on ``{0..n-1}``; element 0 is the identity permutation.

    The order is known without enumeration, so a skeletal groupoid of finite
    sets can report automorphism counts for large n cheaply.
    """

    def __init__(self, n: int):
        self.n = n

    @property
    def order(self) -> int:
        return math.factorial(self.n)

    @cached_property
    def items(self) -> list[tuple[int, ...]]:
        return list(itertools.permutations(range(self.n)))

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {p: i for i, p in enumerate(self.items)}

    @cached_property
    def _inverse(self) -> list[int]:
        idx = self.index
        return [idx[invert_perm(p)] for p in self.items]

    def element(self, g: int) -> tuple[int, ...]:
        return self.items[g]

    def mul(self, g: int, h: int) -> int:
        items = self.items
        return self.index[tuple(map(items[g].__getitem__, items[h]))]

    def inv(self, g: int) -> int:
        return self._inverse[g]

    @cached_property
    def generators(self) -> tuple[int, ...]:
        n = self.n
        if n < 2:
            return ()
        swap = (1, 0) + tuple(range(2, n))
        if n == 2:
            return (self.index[swap],)
        cycle = tuple(range(1, n)) + (0,)
        return (self.index[swap], self.index[cycle])


def cyclic_group(n: int) -> TableGroup:
    return TableGroup([[(a + b) % n for b in range(n)] for a in range(n)])


def perm_group(perms: Sequence[tuple[int, ...]]) -> ElementGroup:
    """Closure of ``perms`` under composition, identity first."""
    if not perms:
        raise StructureError("need at least one permutation")
    n = len(perms[0])
    ident = tuple(range(n))
    seen = {ident}
    items = [ident]
    i = 0
    while i < len(items):
        for p in perms:
            q = compose_perms(p, items[i])
            if q not in seen:
                seen.add(q)
                items.append(q)
        i += 1
    return ElementGroup(items, compose_perms)


def symmetric_table_group(n: int) -> TableGroup:
    """S_n with an explicit table (small n only)."""
    s = SymmetricGroup(n)
    return TableGroup([[s.mul(a, b) for b in range(s.order)] for a in range(s.order)])
