"""Non-crossing partition engine.

Enumeration of NC(k), type vectors, Kreweras complements, quotient-cycle
sizes, interleaved pairs and the residue-class families ``NP_m(a_1..a_s)``,
together with the closed-form counts and brute-force counterparts for each.

Partitions are 1-based throughout: a :class:`SetPartition` of ``[n]`` holds
sorted blocks ordered by their minimum element.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import networkx as nx

from freemix import combinat
from freemix.combinat import binomial, factorial

__all__ = [
    "ENUMERATION_CAP",
    "PAIR_CAP",
    "CrossingError",
    "SetPartition",
    "PartitionTypeVector",
    "type_vectors",
    "is_noncrossing",
    "enumerate_nc",
    "enumerate_nc_by_type",
    "type_vector",
    "kreweras_complement",
    "quotient_cycle_sizes",
    "interleave_pair",
    "pair_region_sizes",
    "enumerate_pairs",
    "count_nc_by_type",
    "count_nc_scaled",
    "count_nc_scaled_brute",
    "count_np_general",
    "count_np_general_cgon",
    "family_colors",
    "enumerate_np_general",
    "enumerate_np_general_cgon",
    "count_np_general_brute",
    "count_np_general_cgon_brute",
    "to_touching",
    "from_touching",
    "labeled_count_ax",
    "labeled_count_ax_pair",
    "count_nc_by_regions",
    "count_nc_by_regions_brute",
    "labeled_count_ax_pair_brute",
]

ENUMERATION_CAP = 14
PAIR_CAP = 7


class CrossingError(ValueError):
    """Raised when an operation that needs a non-crossing partition gets a crossing one."""


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``{1, ..., n}``.

    Build from arbitrary block lists with :meth:`from_blocks`; the plain
    constructor trusts that ``blocks`` is already canonical.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "SetPartition":
        canon = sorted(tuple(sorted(b)) for b in blocks)
        if any(len(b) == 0 for b in canon):
            raise ValueError("blocks must be nonempty")
        elems = [x for b in canon for x in b]
        if n is None:
            n = max(elems, default=0)
        if sorted(elems) != list(range(1, n + 1)):
            raise ValueError(f"blocks do not partition [1..{n}]: {canon}")
        return cls(n, tuple(canon))

    @classmethod
    def singletons(cls, n: int) -> "SetPartition":
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def full(cls, n: int) -> "SetPartition":
        return cls(n, (tuple(range(1, n + 1)),))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def block_index(self) -> list[int]:
        """``idx[x]`` is the position in :attr:`blocks` of the block holding ``x`` (index 0 unused)."""
        idx = [0] * (self.n + 1)
        for j, b in enumerate(self.blocks):
            for x in b:
                idx[x] = j
        return idx

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class PartitionTypeVector:
    """``(alpha_1, ..., alpha_k)``: ``alpha_i`` blocks of size ``i``, with ``sum i*alpha_i = k``."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if not counts:
            raise ValueError("type vector must have k >= 1 entries")
        if any(c < 0 for c in counts):
            raise ValueError(f"negative entry in type vector {counts}")
        weight = sum((i + 1) * c for i, c in enumerate(counts))
        if weight != len(counts):
            raise ValueError(
                f"inconsistent type vector {counts}: sum i*alpha_i = {weight} != k = {len(counts)}"
            )

    @classmethod
    def parse(cls, text: str) -> "PartitionTypeVector":
        return cls(tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok != ""))

    @classmethod
    def from_parts(cls, parts: Iterable[int], k: int | None = None) -> "PartitionTypeVector":
        parts = list(parts)
        k = sum(parts) if k is None else k
        counts = [0] * k
        for p in parts:
            counts[p - 1] += 1
        return cls(tuple(counts))

    @classmethod
    def singletons(cls, k: int) -> "PartitionTypeVector":
        return cls((k,) + (0,) * (k - 1))

    @classmethod
    def full_block(cls, k: int) -> "PartitionTypeVector":
        return cls((0,) * (k - 1) + (1,))

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def a(self) -> int:
        """Number of blocks."""
        return sum(self.counts)

    def parts(self) -> list[int]:
        """Block sizes in descending order."""
        return [i + 1 for i in reversed(range(self.k)) for _ in range(self.counts[i])]

    def factorial_product(self) -> int:
        return math.prod(factorial(c) for c in self.counts)

    def weight(self) -> Fraction:
        """``(a-1)! / (alpha_1! ... alpha_k!)``."""
        return Fraction(factorial(self.a - 1), self.factorial_product())

    def monomial(self, values: Sequence[Fraction | int | float]) -> Fraction | float:
        """``prod_i values[i-1] ** alpha_i``; ``values`` is 1-based-by-position."""
        out: Fraction | float = Fraction(1)
        for i, c in enumerate(self.counts):
            if c:
                out *= values[i] ** c
        return out

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.counts)


def _integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _integer_partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def type_vectors(k: int) -> tuple[PartitionTypeVector, ...]:
    """All of ``P_k``, ordered lexicographically on the descending part list (largest first)."""
    if k < 1:
        raise ValueError("k must be positive")
    return tuple(PartitionTypeVector.from_parts(p, k) for p in _integer_partitions(k))


# ---------------------------------------------------------------------------
# Basic predicates and maps
# ---------------------------------------------------------------------------


def is_noncrossing(p: SetPartition) -> bool:
    """True iff no ``a < b < c < d`` with ``a, c`` in one block and ``b, d`` in another.

    Single left-to-right sweep: a block that is revisited must sit on top of
    the stack of currently open blocks.
    """
    idx = p.block_index()
    first = [b[0] for b in p.blocks]
    last = [b[-1] for b in p.blocks]
    stack: list[int] = []
    for x in range(1, p.n + 1):
        j = idx[x]
        if x == first[j]:
            if x != last[j]:
                stack.append(j)
            continue
        if not stack or stack[-1] != j:
            return False
        if x == last[j]:
            stack.pop()
    return True


def _require_nc(p: SetPartition) -> None:
    if not is_noncrossing(p):
        raise CrossingError(f"partition {p} is crossing")


def type_vector(p: SetPartition) -> PartitionTypeVector:
    counts = [0] * p.n
    for b in p.blocks:
        counts[len(b) - 1] += 1
    return PartitionTypeVector(tuple(counts))


def kreweras_complement(p: SetPartition) -> SetPartition:
    """Kreweras complement, with ``i'`` placed just after ``i`` on the doubled cycle.

    As permutations (blocks read as increasing cycles) this is
    ``p^{-1} o gamma`` where ``gamma = (1 2 ... n)``.
    """
    _require_nc(p)
    n = p.n
    inv = [0] * (n + 1)
    for b in p.blocks:
        for j, x in enumerate(b):
            inv[x] = b[j - 1]  # predecessor in the cycle of its block
    perm = [0] + [inv[i % n + 1] for i in range(1, n + 1)]
    seen = [False] * (n + 1)
    blocks = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        blocks.append(tuple(sorted(cyc)))
    return SetPartition(n, tuple(sorted(blocks)))


def quotient_cycle_sizes(p: SetPartition) -> list[int]:
    """Sizes of the cycles left after contracting every block of ``p`` on the cycle ``C_n``.

    Each edge ``(i, i+1)`` of ``C_n`` becomes an edge between the blocks of
    its endpoints; the result is a cactus whose cycles are its biconnected
    components.  Edges are subdivided twice so loops and parallel edges
    survive in a simple graph.  Returned sorted descending.
    """
    _require_nc(p)
    n = p.n
    idx = p.block_index()
    g = nx.Graph()
    loops = 0
    for i in range(1, n + 1):
        u, v = idx[i], idx[i % n + 1]
        if u == v:
            loops += 1
            continue
        g.add_edge(("B", u), ("e", i, 0))
        g.add_edge(("e", i, 0), ("e", i, 1))
        g.add_edge(("e", i, 1), ("B", v))
    sizes = [loops_one for loops_one in [1] * loops]
    for comp in nx.biconnected_components(g):
        edges = {node[1] for node in comp if node[0] == "e"}
        if edges:
            sizes.append(len(edges))
    return sorted(sizes, reverse=True)


def interleave_pair(pi: SetPartition, sigma: SetPartition) -> SetPartition:
    """``pi`` on odd positions ``2i-1`` and ``sigma`` on even positions ``2i`` of ``[2k]``."""
    if pi.n != sigma.n:
        raise ValueError("pi and sigma must partition the same [k]")
    blocks = [tuple(2 * x - 1 for x in b) for b in pi.blocks]
    blocks += [tuple(2 * x for x in b) for b in sigma.blocks]
    return SetPartition(2 * pi.n, tuple(sorted(blocks)))


def pair_region_sizes(pi: SetPartition, sigma: SetPartition) -> list[int]:
    """Halved quotient-cycle sizes of the interleaving of ``pi`` and ``sigma``."""
    sizes = quotient_cycle_sizes(interleave_pair(pi, sigma))
    odd = [x for x in sizes if x % 2]
    if odd:
        raise ArithmeticError(
            f"odd quotient cycle size {odd} for pair {pi} / {sigma}; interleaving embodiment broken"
        )
    return [x // 2 for x in sizes]


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _nc_blocks(positions: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    """Non-crossing partitions of an ordered position tuple, by first-block placement."""
    if not positions:
        yield []
        return
    first, rest = positions[0], positions[1:]
    for r in range(len(rest) + 1):
        for chosen in itertools.combinations(range(len(rest)), r):
            block = (first,) + tuple(rest[i] for i in chosen)
            gaps = []
            prev = 0
            for i in chosen:
                gaps.append(rest[prev:i])
                prev = i + 1
            gaps.append(rest[prev:])
            for tail in _fill_gaps(gaps):
                yield [block] + tail


def _fill_gaps(gaps: list[tuple[int, ...]]) -> Iterator[list[tuple[int, ...]]]:
    if not gaps:
        yield []
        return
    for head in _nc_blocks(gaps[0]):
        for tail in _fill_gaps(gaps[1:]):
            yield head + tail


def enumerate_nc(k: int) -> Iterator[SetPartition]:
    """Every non-crossing partition of ``[k]`` exactly once, in a fixed order."""
    if not 1 <= k <= ENUMERATION_CAP:
        raise ValueError(f"enumerate_nc supports 1 <= k <= {ENUMERATION_CAP}, got {k}")
    for blocks in _nc_blocks(tuple(range(1, k + 1))):
        yield SetPartition(k, tuple(sorted(blocks)))


def enumerate_nc_by_type(alpha: PartitionTypeVector) -> Iterator[SetPartition]:
    """Filtered enumeration: the partitions of ``NC(k)`` whose type vector is ``alpha``."""
    target = alpha.counts
    for p in enumerate_nc(alpha.k):
        if type_vector(p).counts == target:
            yield p


def enumerate_pairs(
    alpha: PartitionTypeVector, beta: PartitionTypeVector
) -> Iterator[tuple[SetPartition, SetPartition]]:
    """Pairs ``(pi, sigma)`` of the given types whose interleaving is non-crossing."""
    if alpha.k != beta.k:
        raise ValueError("alpha and beta must share k")
    if alpha.k > PAIR_CAP:
        raise ValueError(f"enumerate_pairs supports k <= {PAIR_CAP}")
    sigmas = list(enumerate_nc_by_type(beta))
    for pi in enumerate_nc_by_type(alpha):
        for sigma in sigmas:
            if is_noncrossing(interleave_pair(pi, sigma)):
                yield pi, sigma


# ---------------------------------------------------------------------------
# Closed-form counts
# ---------------------------------------------------------------------------


def _common_k(alphas: Sequence[PartitionTypeVector]) -> int:
    if not alphas:
        raise ValueError("need at least one type vector")
    ks = {a.k for a in alphas}
    if len(ks) != 1:
        raise ValueError(f"type vectors must share k, got {sorted(ks)}")
    return ks.pop()


def count_nc_by_type(alpha: PartitionTypeVector) -> int:
    """``|NP(alpha)| = C(k, a-1) (a-1)! / prod alpha_i!``."""
    return count_nc_scaled(alpha, 1)


def count_nc_scaled(alpha: PartitionTypeVector, m: int) -> int:
    """Non-crossing partitions of ``[mk]`` with ``alpha_i`` blocks of size ``m*i``."""
    if m < 1:
        raise ValueError("m must be positive")
    a = alpha.a
    num = binomial(m * alpha.k, a - 1) * factorial(a - 1)
    q, rem = divmod(num, alpha.factorial_product())
    assert rem == 0
    return q


def count_nc_scaled_brute(alpha: PartitionTypeVector, m: int) -> int:
    target = Counter({m * (i + 1): c for i, c in enumerate(alpha.counts) if c})
    return sum(1 for p in enumerate_nc(m * alpha.k) if Counter(p.block_sizes()) == target)


def _np_general_value(alphas: Sequence[PartitionTypeVector], m: int, c: int) -> int:
    k = _common_k(alphas)
    s = len(alphas)
    if s > m:
        raise ValueError(f"need s <= m, got s={s}, m={m}")
    a_sum = sum(al.a for al in alphas)
    num = c * binomial((m - s + 1) * k, m * k - a_sum + c) * k ** (s - 1)
    den = 1
    for al in alphas:
        num *= factorial(al.a - 1)
        den *= al.factorial_product()
    q, rem = divmod(num, den)
    assert rem == 0
    return q


def count_np_general(alphas: Sequence[PartitionTypeVector], m: int) -> int:
    """Closed-form ``|NP_m(alpha_1, ..., alpha_s)|``."""
    return _np_general_value(alphas, m, 1)


def count_np_general_cgon(alphas: Sequence[PartitionTypeVector], m: int, c: int) -> int:
    """Closed-form count of the family with an extra anchored ``c``-gon."""
    k = _common_k(alphas)
    if not 1 <= c <= k:
        raise ValueError(f"need 1 <= c <= k, got c={c}, k={k}")
    return _np_general_value(alphas, m, c)


# ---------------------------------------------------------------------------
# Residue-class families, brute force
# ---------------------------------------------------------------------------


def family_colors(k: int, widths: Sequence[int]) -> list[int]:
    """Colour of each position of ``[Mk]`` (``M = sum(widths)``), index 0 unused.

    Class ``t`` owns ``{(w_1+..+w_{t-1}) + M(i-1) + j : i in [k], j in [w_t]}``.
    """
    total = sum(widths)
    colors = [-1] * (total * k + 1)
    offset = 0
    for t, w in enumerate(widths):
        for i in range(1, k + 1):
            for j in range(1, w + 1):
                colors[offset + total * (i - 1) + j] = t
        offset += w
    return colors


def _family_setup(
    alphas: Sequence[PartitionTypeVector], m: int
) -> tuple[int, list[int], list[dict[int, int]]]:
    k = _common_k(alphas)
    s = len(alphas)
    if not 1 <= s <= m:
        raise ValueError(f"need 1 <= s <= m, got s={s}, m={m}")
    widths = [m - s + 1] + [1] * (s - 1)
    colors = family_colors(k, widths)
    budget = []
    for al, w in zip(alphas, widths):
        budget.append({w * (i + 1): c for i, c in enumerate(al.counts) if c})
    return k, colors, budget


def _cgon_extra(k: int, c: int) -> PartitionTypeVector:
    if not 1 <= c <= k:
        raise ValueError(f"need 1 <= c <= k, got c={c}, k={k}")
    return PartitionTypeVector.from_parts([c] + [1] * (k - c), k)


def _gap_feasible(gap: Sequence[int], colors: Sequence[int], budget: list[dict[int, int]]) -> bool:
    present = Counter(colors[x] for x in gap)
    for col, cnt in present.items():
        sizes = [z for z, c in budget[col].items() if c]
        if not sizes or min(sizes) > cnt:
            return False
    return True


def _colored_fill(
    gaps: list[tuple[int, ...]],
    colors: Sequence[int],
    budget: list[dict[int, int]],
    first_size: int | None = None,
) -> Iterator[list[tuple[int, ...]]]:
    """Monochromatic non-crossing partitions of the pending gaps, drawing block sizes from ``budget``."""
    while gaps and not gaps[-1]:
        gaps = gaps[:-1]
    if not gaps:
        yield []
        return
    gap, pending = gaps[-1], gaps[:-1]
    first = gap[0]
    col = colors[first]
    same = [i for i in range(1, len(gap)) if colors[gap[i]] == col]
    sizes = sorted(z for z, c in budget[col].items() if c)
    if first_size is not None:
        sizes = [z for z in sizes if z == first_size]
    for size in sizes:
        if size - 1 > len(same):
            break
        budget[col][size] -= 1
        for chosen in itertools.combinations(same, size - 1):
            block = (first,) + tuple(gap[i] for i in chosen)
            new_gaps = []
            prev = 1
            for i in chosen:
                new_gaps.append(gap[prev:i])
                prev = i + 1
            new_gaps.append(gap[prev:])
            new_gaps = [g for g in new_gaps if g]
            if not all(_gap_feasible(g, colors, budget) for g in new_gaps):
                continue
            for tail in _colored_fill(pending + new_gaps, colors, budget):
                yield [block] + tail
        budget[col][size] += 1


def _colored_count(
    gaps: tuple[tuple[int, ...], ...],
    budget: tuple[tuple[tuple[int, int], ...], ...],
    memo: dict,
) -> int:
    """Memoized count of the same search tree as :func:`_colored_fill`.

    Gaps are given by their colour strings only, which is all the count depends on.
    """
    gaps = tuple(sorted(g for g in gaps if g))
    if not gaps:
        return 1
    key = (gaps, budget)
    hit = memo.get(key)
    if hit is not None:
        return hit
    gap, pending = gaps[-1], gaps[:-1]
    col = gap[0]
    same = [i for i in range(1, len(gap)) if gap[i] == col]
    bud = [dict(b) for b in budget]
    total = 0
    for size, cnt in budget[col]:
        if cnt == 0 or size - 1 > len(same):
            continue
        bud[col][size] -= 1
        frozen = tuple(tuple(sorted(b.items())) for b in bud)
        for chosen in itertools.combinations(same, size - 1):
            new_gaps = []
            prev = 1
            for i in chosen:
                new_gaps.append(gap[prev:i])
                prev = i + 1
            new_gaps.append(gap[prev:])
            total += _colored_count(pending + tuple(new_gaps), frozen, memo)
        bud[col][size] += 1
    memo[key] = total
    return total


def _freeze(budget: list[dict[int, int]]) -> tuple[tuple[tuple[int, int], ...], ...]:
    return tuple(tuple(sorted(b.items())) for b in budget)


def enumerate_np_general(alphas: Sequence[PartitionTypeVector], m: int) -> Iterator[SetPartition]:
    """Every member of ``NP_m(alpha_1..alpha_s)`` as a partition of ``[mk]`` (non-touching picture)."""
    k, colors, budget = _family_setup(alphas, m)
    n = m * k
    for blocks in _colored_fill([tuple(range(1, n + 1))], colors, budget):
        yield SetPartition(n, tuple(sorted(blocks)))


def enumerate_np_general_cgon(
    alphas: Sequence[PartitionTypeVector], m: int, c: int
) -> Iterator[SetPartition]:
    """Members of the ``c``-gon family on ``[(m+1)k]``.

    The extra class carries one ``c``-block plus singletons, and the block at
    the last position ``(m+1)k`` (the image of the anchor) must be the ``c``-block.
    Enumerated on the rotation that brings the anchor to position 1.
    """
    k = _common_k(alphas)
    extra = _cgon_extra(k, c)
    _, colors, budget = _family_setup(list(alphas) + [extra], m + 1)
    n = (m + 1) * k
    rotated = [-1, colors[n]] + colors[1:n]
    for blocks in _colored_fill([tuple(range(1, n + 1))], rotated, budget, first_size=c):
        back = [tuple(sorted(n if x == 1 else x - 1 for x in b)) for b in blocks]
        yield SetPartition(n, tuple(sorted(back)))


def count_np_general_brute(alphas: Sequence[PartitionTypeVector], m: int) -> int:
    """Exhaustive (memoized) count of the residue-class family."""
    k, colors, budget = _family_setup(alphas, m)
    return _colored_count((tuple(colors[1:]),), _freeze(budget), {})


def count_np_general_cgon_brute(
    alphas: Sequence[PartitionTypeVector], m: int, c: int
) -> int:
    k = _common_k(alphas)
    extra = _cgon_extra(k, c)
    _, colors, budget = _family_setup(list(alphas) + [extra], m + 1)
    n = (m + 1) * k
    rotated = [colors[n]] + colors[1:n]
    # the anchor block is forced first; then everything else is free
    anchor_col = rotated[0]
    same = [i for i in range(1, n) if rotated[i] == anchor_col]
    bud = [dict(b) for b in budget]
    if bud[anchor_col].get(c, 0) == 0:
        return 0
    bud[anchor_col][c] -= 1
    frozen = _freeze(bud)
    memo: dict = {}
    total = 0
    seq = tuple(rotated)
    for chosen in itertools.combinations(same, c - 1):
        gaps = []
        prev = 1
        for i in chosen:
            gaps.append(seq[prev:i])
            prev = i + 1
        gaps.append(seq[prev:])
        total += _colored_count(tuple(gaps), frozen, memo)
    return total


def to_touching(p: SetPartition, k: int, m: int, s: int) -> list[list[tuple[int, ...]]]:
    """Map a member of ``NP_m`` on ``[mk]`` to the touching picture on ``[(m-s+1)k]``.

    Returns one block list per class.  Class 0 keeps its first ``m-s+1``
    points of every period; every other class collapses onto ``(m-s+1)i``.
    """
    if p.n != m * k:
        raise ValueError("partition size does not match m*k")
    w = m - s + 1
    colors = family_colors(k, [w] + [1] * (s - 1))
    out: list[list[tuple[int, ...]]] = [[] for _ in range(s)]
    for b in p.blocks:
        t = colors[b[0]]
        if t == 0:
            img = tuple(w * ((x - 1) // m) + ((x - 1) % m) + 1 for x in b)
        else:
            img = tuple(w * ((x - 1) // m + 1) for x in b)
        out[t].append(img)
    return [sorted(blocks) for blocks in out]


def from_touching(classes: Sequence[Sequence[Sequence[int]]], k: int, m: int) -> SetPartition:
    """Inverse of :func:`to_touching`."""
    s = len(classes)
    w = m - s + 1
    blocks = []
    for t, cls in enumerate(classes):
        for b in cls:
            if t == 0:
                blocks.append(tuple(m * ((x - 1) // w) + ((x - 1) % w) + 1 for x in b))
            else:
                blocks.append(tuple(m * (x // w) - (s - 1 - t) for x in b))
    return SetPartition.from_blocks(blocks, m * k)


# ---------------------------------------------------------------------------
# Labeled counts
# ---------------------------------------------------------------------------


def _check_regions(x: Sequence[int], parts: int, total: int) -> None:
    if len(x) != parts or sum(x) != total or any(v < 1 for v in x):
        raise ValueError(
            f"region sizes {list(x)} inconsistent: need {parts} positive parts summing to {total}"
        )


def labeled_count_ax(alpha: PartitionTypeVector, x: Sequence[int]) -> int:
    """``k (p-1)! (a-1)!``: partitions of type ``alpha`` with region sizes ``x``, polygons and regions labeled."""
    k, a = alpha.k, alpha.a
    p = k - a + 1
    _check_regions(x, p, k)
    return k * factorial(p - 1) * factorial(a - 1)


def labeled_count_ax_pair(
    alpha: PartitionTypeVector, beta: PartitionTypeVector, x: Sequence[int]
) -> int:
    """``k^2 (p-1)! (a-1)! (b-1)!`` with ``p = 2k - a - b + 1``."""
    k = _common_k([alpha, beta])
    p = 2 * k - alpha.a - beta.a + 1
    _check_regions(x, p, k)
    return k * k * factorial(p - 1) * factorial(alpha.a - 1) * factorial(beta.a - 1)


def count_nc_by_regions(alpha: PartitionTypeVector, x: Sequence[int]) -> int:
    """``|NP(alpha, X)|`` recovered from the labeled count via ``perm(X) / (p! prod alpha_i!)``."""
    p = len(x)
    num = labeled_count_ax(alpha, x) * combinat.multiset_permutations(x)
    q, rem = divmod(num, factorial(p) * alpha.factorial_product())
    if rem:
        raise ArithmeticError(f"non-integral region count for {alpha}, {list(x)}")
    return q


def count_nc_by_regions_brute(alpha: PartitionTypeVector, x: Sequence[int]) -> int:
    target = sorted(x, reverse=True)
    return sum(1 for p in enumerate_nc_by_type(alpha) if quotient_cycle_sizes(p) == target)


def labeled_count_ax_pair_brute(
    alpha: PartitionTypeVector, beta: PartitionTypeVector, x: Sequence[int]
) -> int:
    """Pairs with halved region sizes ``x``, times all polygon and region labelings."""
    target = sorted(x, reverse=True)
    raw = sum(1 for pi, sigma in enumerate_pairs(alpha, beta) if pair_region_sizes(pi, sigma) == target)
    region_labels = factorial(len(x)) // combinat.multiset_permutations(x)
    return raw * alpha.factorial_product() * beta.factorial_product() * region_labels
