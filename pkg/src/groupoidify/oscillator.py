"""
Creation and annihilation on the groupoid of finite sets.

E_N is skeletal: object n is the set {0..n-1} with automorphism group S_n.
The annihilation span A has apex E_{N-1}, left leg the inclusion and right
leg n ↦ n+1 (a permutation extends by fixing the new top element); the
creation span is its adjoint.  Matrices use the basis of indicator
functions of the classes 0..N, so A sends e_n to n·e_{n-1} and A* sends
e_n to e_{n+1}.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import config
from .degroupoidify import RationalMatrix, matrix
from .errors import BoundError
from .groupoid import (
    ActionGroupoid,
    DisjointUnion,
    Functor,
    GroupAction,
    SkeletalGroupoid,
    discrete,
    one_object,
)
from .groups import SymmetricGroup
from .span import (
    GroupoidOver,
    Span,
    adjoint,
    compose,
    identity_span,
    scalar,
    skeleton_span,
    span_sum,
)

A_LETTER = "a"
C_LETTER = "a*"


class TruncatedE(SkeletalGroupoid):
    def __init__(self, N: int):
        super().__init__([SymmetricGroup(n) for n in range(N + 1)])
        self.N = N


@lru_cache(maxsize=None)
def build_E(N: int) -> TruncatedE:
    """Finite sets of size ≤ N and their bijections (one object per size)."""
    if not 0 <= N <= config.E_MAX:
        raise BoundError(f"N must be in 0..{config.E_MAX}, got {N}")
    return TruncatedE(N)


@lru_cache(maxsize=None)
def ladder_spans(N: int) -> tuple[Span, Span]:
    """(A, A*) on E_N."""
    if N < 1:
        raise BoundError("ladder spans need N ≥ 1")
    E, apex = build_E(N), build_E(N - 1)

    def inc_mor(m: int) -> int:
        n, g = apex.element(m)
        return E.morphism(n, g)

    def succ_mor(m: int) -> int:
        n, g = apex.element(m)
        perm = apex.groups[n].element(g) + (n,)
        return E.morphism(n + 1, E.groups[n + 1].index[perm])

    inclusion = Functor(apex, E, lambda n: n, inc_mor)
    successor = Functor(apex, E, lambda n: n + 1, succ_mor, cache=True)
    A = Span(apex, inclusion, successor)
    return A, adjoint(A)


def psi_n(n: int, N: int) -> GroupoidOver:
    """1//S_n sitting over the n-element set."""
    if not 0 <= n <= N:
        raise BoundError(f"need 0 ≤ n ≤ N, got n={n}, N={N}")
    E = build_E(N)
    G = one_object(SymmetricGroup(n))
    return GroupoidOver(G, E, Functor(G, E, lambda x: n, lambda m: E.morphism(n, m)))


def _coloring_action(n: int) -> GroupAction:
    S = SymmetricGroup(n)

    def act(g: int, c: int) -> int:
        # (σ·c)(σ(i)) = c(i)
        perm = S.element(g)
        out = 0
        for i in range(n):
            if c >> i & 1:
                out |= 1 << perm[i]
        return out

    return GroupAction(S, 1 << n, act)


def two_colored(N: int) -> GroupoidOver:
    """2-colorings of {0..n-1}, n ≤ N, with color-preserving bijections."""
    E = build_E(N)
    parts = [ActionGroupoid(_coloring_action(n)) for n in range(N + 1)]
    U = DisjointUnion(parts)

    def ob(x: int) -> int:
        return U.locate_object(x)[0]

    def mor(m: int) -> int:
        n, mm = U.locate(m)
        return E.morphism(n, parts[n].split(mm)[0])

    return GroupoidOver(U, E, Functor(U, E, ob, mor))


# ---------------------------------------------------------------------------
# commutation relation


@dataclass
class CommutationReport:
    N: int
    ok: bool
    safe_block: int                    # entries with m, n ≤ safe_block compared
    excluded: list[tuple[int, int]]    # boundary entries left out
    diag_aa_star: list[Fraction]
    diag_a_star_a: list[Fraction]
    mismatches: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        s = lambda q: f"{q.numerator}/{q.denominator}"  # noqa: E731
        return {"N": self.N, "ok": self.ok, "safe_block": self.safe_block,
                "excluded": [list(p) for p in self.excluded],
                "diag_aa_star": [s(q) for q in self.diag_aa_star],
                "diag_a_star_a": [s(q) for q in self.diag_a_star_a],
                "mismatches": [list(p) for p in self.mismatches]}


def verify_commutation(N: int) -> CommutationReport:
    """AA* against A*A + 1 on the block unaffected by the cutoff at N."""
    if N < 2:
        raise BoundError("need N ≥ 2")
    A, As = ladder_spans(N)
    E = build_E(N)
    M1 = matrix(compose(A, As))
    M2 = matrix(span_sum(compose(As, A), identity_span(E)))
    safe = N - 1
    mism = [(m, n) for m in range(safe + 1) for n in range(safe + 1)
            if M1[m, n] != M2[m, n]]
    excluded = [(m, n) for m in range(N + 1) for n in range(N + 1) if max(m, n) > safe]
    return CommutationReport(N, not mism, safe, excluded,
                             [M1[n, n] for n in range(N + 1)],
                             [matrix(compose(As, A))[n, n] for n in range(N + 1)], mism)


# ---------------------------------------------------------------------------
# formal sums of words


Word = tuple[str, ...]


class FormalOperatorSum:
    """Words in a, a* with positive integer coefficients.

    A word is read as an operator product: its last letter acts first.
    """

    def __init__(self, terms: dict[Word, int] | None = None):
        self.terms: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            if c < 0:
                raise ValueError("coefficients must be non-negative")
            if c:
                for letter in w:
                    if letter not in (A_LETTER, C_LETTER):
                        raise ValueError(f"unknown letter {letter!r}")
                self.terms[tuple(w)] = self.terms.get(tuple(w), 0) + c

    @classmethod
    def parse(cls, mapping: dict[str, int]) -> "FormalOperatorSum":
        return cls({parse_word(k): v for k, v in mapping.items()})

    def __mul__(self, other: "FormalOperatorSum") -> "FormalOperatorSum":
        out: Counter = Counter()
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out[w1 + w2] += c1 * c2
        return FormalOperatorSum(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalOperatorSum) and self.terms == other.terms

    def as_strings(self) -> dict[str, int]:
        return {word_str(w): c for w, c in sorted(self.terms.items())}

    def __repr__(self) -> str:
        return f"FormalOperatorSum({self.as_strings()})"


def word_str(w: Word) -> str:
    return "".join(w)


def parse_word(s: str) -> Word:
    out = []
    i = 0
    while i < len(s):
        if s.startswith(C_LETTER, i):
            out.append(C_LETTER)
            i += 2
        elif s[i] == A_LETTER:
            out.append(A_LETTER)
            i += 1
        else:
            raise ValueError(f"cannot parse word {s!r}")
    return tuple(out)


def normal_order(n: int) -> FormalOperatorSum:
    """Expand (a + a*)^n and move every a* to the left of every a, with no
    correction terms."""
    if n < 0:
        raise ValueError("power must be non-negative")
    out: Counter = Counter()
    for word in itertools.product((A_LETTER, C_LETTER), repeat=n):
        out[tuple(sorted(word, key=lambda x: x != C_LETTER))] += 1
    return FormalOperatorSum(out)


def normal_product(valences) -> FormalOperatorSum:
    """:Φ^{n1}: ··· :Φ^{nk}: as a formal sum."""
    total = FormalOperatorSum({(): 1})
    for n in valences:
        total = total * normal_order(n)
    return total


_word_cache: dict[tuple[int, Word], Span] = {}


def word_span(word: Word, N: int) -> Span:
    """Composite of ladder spans for a word, reduced to a skeletal apex at
    every step (equivalent spans have equal matrices)."""
    key = (N, word)
    hit = _word_cache.get(key)
    if hit is not None:
        return hit
    A, As = ladder_spans(N)
    if not word:
        span = identity_span(build_E(N))
    elif len(word) == 1:
        span = A if word[0] == A_LETTER else As
    else:
        first = A if word[0] == A_LETTER else As
        span = skeleton_span(compose(first, word_span(word[1:], N)))[0]
    _word_cache[key] = span
    return span


def realize(total: FormalOperatorSum, N: int) -> Span:
    """Span for a formal sum: words become composites, coefficient k becomes
    a product with the k-element set, terms are added."""
    E = build_E(N)
    if total.terms == {(): 1}:
        return identity_span(E)
    spans = []
    for w, c in sorted(total.terms.items()):
        s = word_span(w, N)
        spans.append(s if c == 1 else scalar(discrete(c), s))
    if not spans:
        empty = discrete(0)
        return Span(empty, Functor(empty, E, [], []), Functor(empty, E, [], []))
    out = spans[0]
    for s in spans[1:]:
        out = span_sum(out, s)
    return out


def safe_bound(valences, i: int, j: int) -> int:
    """Smallest cutoff at which entry ([j], [i]) of the composite is exact:
    no intermediate set grows past (i + j + Σ valences) / 2."""
    return max(1, i, j, (i + j + sum(valences)) // 2)


# ---------------------------------------------------------------------------
# Feynman diagrams


@dataclass(frozen=True)
class FeynmanDiagram:
    """Legs S = {0..i-1} (in), T = {0..j-1} (out); internal vertices 0..k-1
    in operator order (vertex 0 acts last).

    ``s_ends[a]`` / ``t_ends[b]`` say where each leg goes: ``("T", b)``,
    ``("S", a)`` or ``("V", v)``.  ``edges`` holds vertex-vertex
    multiplicities keyed by ``(v, w)`` with ``v < w``.
    """

    valences: tuple[int, ...]
    i: int
    j: int
    s_ends: tuple[tuple[str, int], ...]
    t_ends: tuple[tuple[str, int], ...]
    edges: tuple[tuple[tuple[int, int], int], ...]

    def relabel(self, sig: tuple[int, ...], tau: tuple[int, ...]) -> "FeynmanDiagram":
        """Rename in-leg a to sig[a] and out-leg b to tau[b]."""
        s_ends = [None] * self.i
        t_ends = [None] * self.j
        for a, (kind, x) in enumerate(self.s_ends):
            s_ends[sig[a]] = (kind, tau[x]) if kind == "T" else (kind, x)
        for b, (kind, x) in enumerate(self.t_ends):
            t_ends[tau[b]] = (kind, sig[x]) if kind == "S" else (kind, x)
        return FeynmanDiagram(self.valences, self.i, self.j, tuple(s_ends),
                              tuple(t_ends), self.edges)

    def weight(self) -> int:
        """Ways to attach the labeled stubs of each vertex to this graph."""
        w = math.prod(math.factorial(n) for n in self.valences)
        for _, m in self.edges:
            w //= math.factorial(m)
        return w

    def to_json(self) -> dict:
        return {"valences": list(self.valences), "in": self.i, "out": self.j,
                "in_legs": [list(e) for e in self.s_ends],
                "out_legs": [list(e) for e in self.t_ends],
                "edges": [[v, w, m] for (v, w), m in self.edges]}


def _vertex_multigraphs(residual: list[int], start: int = 0):
    """Loop-free multigraphs on the vertices with the given degrees."""
    k = len(residual)
    v = start
    while v < k and residual[v] == 0:
        v += 1
    if v == k:
        yield {}
        return
    need = residual[v]
    later = list(range(v + 1, k))

    def split(idx: int, left: int, acc: dict):
        if left == 0:
            saved = residual[v]
            residual[v] = 0
            yield from ({**acc, **g} for g in _vertex_multigraphs(residual, v + 1))
            residual[v] = saved
            return
        if idx == len(later):
            return
        w = later[idx]
        for m in range(min(left, residual[w]), -1, -1):
            residual[w] -= m
            nxt = dict(acc)
            if m:
                nxt[v, w] = m
            yield from split(idx + 1, left - m, nxt)
            residual[w] += m

    yield from split(0, need, {})


def enumerate_diagrams(valences, i: int, j: int):
    """Every admissible labeled diagram: no self-loops, no in-in or out-out
    edges, every stub used."""
    valences = tuple(valences)
    k = len(valences)
    targets = [("T", b) for b in range(j)] + [("V", v) for v in range(k)]
    for choice in itertools.product(range(len(targets)), repeat=i):
        used_t = [targets[c][1] for c in choice if targets[c][0] == "T"]
        if len(set(used_t)) != len(used_t):
            continue
        residual = list(valences)
        s_ends = []
        ok = True
        for c in choice:
            kind, x = targets[c]
            if kind == "V":
                residual[x] -= 1
                if residual[x] < 0:
                    ok = False
                    break
            s_ends.append((kind, x))
        if not ok:
            continue
        t_fixed = {x: a for a, (kind, x) in enumerate(s_ends) if kind == "T"}
        free_t = [b for b in range(j) if b not in t_fixed]
        for vs in itertools.product(range(k), repeat=len(free_t)):
            res2 = list(residual)
            bad = False
            for v in vs:
                res2[v] -= 1
                if res2[v] < 0:
                    bad = True
                    break
            if bad:
                continue
            t_ends = [None] * j
            for b, a in t_fixed.items():
                t_ends[b] = ("S", a)
            for b, v in zip(free_t, vs):
                t_ends[b] = ("V", v)
            for g in _vertex_multigraphs(res2):
                yield FeynmanDiagram(valences, i, j, tuple(s_ends), tuple(t_ends),
                                     tuple(sorted(g.items())))


def symmetry_order(d: FeynmanDiagram) -> int:
    """Relabelings of the in- and out-legs fixing d, times the permutations
    of parallel internal edges."""
    stab = sum(1 for sig in itertools.permutations(range(d.i))
               for tau in itertools.permutations(range(d.j)) if d.relabel(sig, tau) == d)
    return stab * math.prod(math.factorial(m) for _, m in d.edges)


def diagram_classes(valences, i: int, j: int) -> list[FeynmanDiagram]:
    """One representative per relabeling class of legs."""
    seen: set[FeynmanDiagram] = set()
    reps = []
    perms_i = list(itertools.permutations(range(i)))
    perms_j = list(itertools.permutations(range(j)))
    for d in enumerate_diagrams(valences, i, j):
        if d in seen:
            continue
        reps.append(d)
        for sig in perms_i:
            for tau in perms_j:
                seen.add(d.relabel(sig, tau))
    return reps


def feynman_entry(valences, i: int, j: int) -> Fraction:
    """Σ over diagram classes of |Aut(in-set)|·Π n_v! / |symmetries|."""
    if (i + j + sum(valences)) % 2:
        return Fraction(0)
    stub_perms = math.prod(math.factorial(n) for n in valences)
    return sum((Fraction(math.factorial(i) * stub_perms, symmetry_order(d))
                for d in diagram_classes(valences, i, j)), Fraction(0))


def feynman_diagrams_json(valences, i: int, j: int) -> list[dict]:
    out = []
    for d in diagram_classes(valences, i, j):
        rec = d.to_json()
        rec["symmetry_order"] = symmetry_order(d)
        out.append(rec)
    return out


def span_entry(valences, i: int, j: int) -> Fraction:
    """Entry ([j], [i]) of the realized :Φ^{n1}:···:Φ^{nk}: at a safe cutoff."""
    N = safe_bound(valences, i, j)
    M = matrix(realize(normal_product(valences), N))
    return M[j, i]


def span_block(valences, max_legs: int) -> RationalMatrix:
    """Realized matrix at a cutoff exact for every entry ([j], [i]) with
    i, j ≤ max_legs; read several entries without rebuilding the span."""
    N = safe_bound(valences, max_legs, max_legs)
    return matrix(realize(normal_product(valences), N))


def ladder_matrices(N: int) -> tuple[RationalMatrix, RationalMatrix]:
    A, As = ladder_spans(N)
    return matrix(A), matrix(As)
