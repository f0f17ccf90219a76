"""
Random finite groupoids, functors, spans and groupoids-over, for property
checks.

Every finite connected groupoid is isomorphic to (k points, one arrow
between any two) × 1//G, so a random groupoid is a disjoint union of such
blocks with its object and morphism ids shuffled.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .groupoid import FiniteGroupoid, Functor
from .groups import FiniteGroup, TableGroup, cyclic_group, perm_group, symmetric_table_group
from .span import GroupoidOver, Span


def small_groups() -> list[FiniteGroup]:
    klein = perm_group([(1, 0, 3, 2), (2, 3, 0, 1)])
    klein_t = TableGroup([[klein.mul(a, b) for b in range(4)] for a in range(4)])
    return [cyclic_group(1), cyclic_group(2), cyclic_group(3), cyclic_group(4),
            klein_t, symmetric_table_group(3)]


_GROUPS = small_groups()


@dataclass
class Block:
    k: int
    group: FiniteGroup
    objects: list[int]                       # local index -> object id
    mor: dict[tuple[int, int, int], int]     # (i, j, g) -> morphism id


class BlockGroupoid(FiniteGroupoid):
    """FiniteGroupoid that remembers the block decomposition it was built from."""

    blocks: list[Block]

    def block_of(self, x: int) -> tuple[int, int]:
        return self._where[x]


def block_groupoid(layout: list[tuple[int, FiniteGroup]], rng: random.Random | None = None
                   ) -> BlockGroupoid:
    """Disjoint union of codiscrete(k) × 1//G blocks; ids shuffled if rng given."""
    n_obj = sum(k for k, _ in layout)
    n_mor = sum(k * k * g.order for k, g in layout)
    obj_ids = list(range(n_obj))
    mor_ids = list(range(n_mor))
    if rng is not None:
        rng.shuffle(obj_ids)
        rng.shuffle(mor_ids)
    src, tgt, inv = [0] * n_mor, [0] * n_mor, [0] * n_mor
    ident = [0] * n_obj
    table = {}
    blocks = []
    oi = mi = 0
    for k, grp in layout:
        objs = obj_ids[oi:oi + k]
        oi += k
        mor = {}
        for i in range(k):
            for j in range(k):
                for g in range(grp.order):
                    mor[i, j, g] = mor_ids[mi]
                    mi += 1
        for (i, j, g), m in mor.items():
            src[m], tgt[m] = objs[i], objs[j]
            inv[m] = mor[j, i, grp.inv(g)]
            for l in range(k):
                for h in range(grp.order):
                    table[mor[j, l, h], m] = mor[i, l, grp.mul(h, g)]
        for i in range(k):
            ident[objs[i]] = mor[i, i, grp.identity]
        blocks.append(Block(k, grp, objs, mor))
    G = BlockGroupoid(n_obj, src, tgt, ident, inv, table)
    G.blocks = blocks
    G._where = {}
    for b, blk in enumerate(blocks):
        for i, x in enumerate(blk.objects):
            G._where[x] = (b, i)
    return G


def random_groupoid(rng: random.Random, max_objects: int = 8, max_morphisms: int = 40,
                    max_classes: int = 4, min_classes: int = 1) -> BlockGroupoid:
    layout: list[tuple[int, FiniteGroup]] = []
    objs = mors = 0
    target = rng.randint(min_classes, max_classes)
    tries = 0
    while len(layout) < target and tries < 50:
        tries += 1
        k = rng.choice((1, 1, 1, 2, 2, 3))
        g = rng.choice(_GROUPS)
        if objs + k > max_objects or mors + k * k * g.order > max_morphisms:
            continue
        layout.append((k, g))
        objs += k
        mors += k * k * g.order
    if not layout:
        layout = [(1, _GROUPS[0])]
    return block_groupoid(layout, rng)


def _homomorphism(rng: random.Random, G: FiniteGroup, H: FiniteGroup) -> list[int]:
    """A random homomorphism G -> H as a lookup table (trivial if the draw fails)."""
    for _ in range(6):
        gens = list(G.generators)
        images = {g: rng.randrange(H.order) for g in gens}
        phi = {G.identity: H.identity}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = G.mul(g, x)
                    val = H.mul(images[g], phi[x])
                    if y in phi:
                        if phi[y] != val:
                            ok = False
                            break
                    else:
                        phi[y] = val
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok:
            return [phi[g] for g in range(G.order)]
    return [H.identity] * G.order


def random_functor(rng: random.Random, S: BlockGroupoid, T: BlockGroupoid) -> Functor:
    """Each source block goes into one target block through a random
    homomorphism of automorphism groups and random object choices."""
    ob = [0] * S.num_objects
    mor = [0] * S.num_morphisms()
    for blk in S.blocks:
        tb = rng.choice(T.blocks)
        phi = _homomorphism(rng, blk.group, tb.group)
        place = [rng.randrange(tb.k) for _ in range(blk.k)]
        for i, x in enumerate(blk.objects):
            ob[x] = tb.objects[place[i]]
        for (i, j, g), m in blk.mor.items():
            mor[m] = tb.mor[place[i], place[j], phi[g]]
    return Functor(S, T, ob, mor)


def random_span(rng: random.Random, X: BlockGroupoid | None = None,
                Y: BlockGroupoid | None = None, max_classes: int = 4) -> Span:
    X = X or random_groupoid(rng, max_classes=max_classes)
    Y = Y or random_groupoid(rng, max_classes=max_classes)
    A = random_groupoid(rng, max_classes=max_classes)
    return Span(A, random_functor(rng, A, Y), random_functor(rng, A, X))


def random_over(rng: random.Random, X: BlockGroupoid, max_classes: int = 4) -> GroupoidOver:
    T = random_groupoid(rng, max_classes=max_classes)
    return GroupoidOver(T, X, random_functor(rng, T, X))
