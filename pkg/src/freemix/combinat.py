"""Exact combinatorial kernel.

Factorials, binomials, Catalan and Fuss-Catalan numbers, plus evaluators for
the binomial and Catalan-sum identities used by the moment formulas.  Every
identity evaluator returns an ``(lhs, rhs)`` pair so that callers can report
both sides when a check fails.

All arithmetic is on Python ``int`` / :class:`fractions.Fraction`, so there is
no overflow anywhere in the reachable ranges.
"""

from __future__ import annotations

import itertools
import math
import threading
from collections import Counter
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

__all__ = [
    "FACTORIAL_CACHE_CAP",
    "factorial",
    "binomial",
    "falling_factorial",
    "catalan",
    "fuss_catalan",
    "multiset_permutations",
    "compositions",
    "weak_compositions",
    "verify_alt_binomial_1",
    "verify_alt_binomial_2",
    "catalan_composition_sum",
    "catalan_composition_sum_brute",
    "fuss_catalan_composition_sum",
    "fuss_catalan_composition_sum_brute",
    "verify_key_identity",
    "product_shift_sum",
    "product_shift_sum_brute",
]

FACTORIAL_CACHE_CAP = 512

_fact_lock = threading.Lock()
_fact_table: list[int] = [1]


def factorial(n: int) -> int:
    """Return ``n!``, memoized up to :data:`FACTORIAL_CACHE_CAP`."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    if n > FACTORIAL_CACHE_CAP:
        return math.factorial(n)
    table = _fact_table
    if n < len(table):
        return table[n]
    with _fact_lock:
        # another thread may have grown the table meanwhile
        while len(_fact_table) <= n:
            _fact_table.append(_fact_table[-1] * len(_fact_table))
        return _fact_table[n]


def binomial(n: int, r: int) -> int:
    """Binomial coefficient with the zero convention outside ``0 <= r <= n``.

    >>> binomial(4, 2), binomial(3, 5), binomial(3, -1)
    (6, 0, 0)
    """
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


def falling_factorial(x: int, s: int) -> int:
    """``x (x-1) ... (x-s+1)``; equals 1 for ``s == 0``."""
    out = 1
    for j in range(s):
        out *= x - j
    return out


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("catalan requires n >= 0")
    return binomial(2 * n, n) // (n + 1)


def fuss_catalan(k: int, m: int) -> int:
    """Fuss-Catalan number ``binom((m+1)k, k) / (mk+1)``.

    ``fuss_catalan(k, 1)`` is the ordinary Catalan number and
    ``fuss_catalan(k, 0)`` is 1 for every ``k``.
    """
    if k < 0 or m < 0:
        raise ValueError("fuss_catalan requires k, m >= 0")
    num = binomial((m + 1) * k, k)
    q, rem = divmod(num, m * k + 1)
    assert rem == 0
    return q


def multiset_permutations(sizes: Iterable[int]) -> int:
    """Number of distinct orderings of a multiset, ``p! / prod(mult!)``."""
    items = list(sizes)
    if not items:
        raise ValueError("multiset must be nonempty")
    out = factorial(len(items))
    for mult in Counter(items).values():
        out //= factorial(mult)
    return out


def compositions(total: int, parts: int, minimum: int = 1) -> Iterator[tuple[int, ...]]:
    """Yield ordered tuples of ``parts`` integers ``>= minimum`` summing to ``total``."""
    if parts < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return
    slack = total - parts * minimum
    if slack < 0:
        return
    # stars and bars over the slack
    for cuts in itertools.combinations(range(slack + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1 + minimum)
            prev = c
        out.append(slack + parts - 2 - prev + minimum)
        yield tuple(out)


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    return compositions(total, parts, minimum=0)


def verify_alt_binomial_1(n: int, m: int, k: int) -> tuple[int, int]:
    """Both sides of
    ``sum_{i=0}^{m-k} (-1)^{i+m-k} C(m-i, k) C(n, i) = C(n-k-1, m-k)``.

    Requires ``0 <= k <= m < n``.
    """
    if not (0 <= k <= m < n):
        raise ValueError(f"need 0 <= k <= m < n, got n={n}, m={m}, k={k}")
    lhs = sum(
        (-1) ** (i + m - k) * binomial(m - i, k) * binomial(n, i)
        for i in range(m - k + 1)
    )
    return lhs, binomial(n - k - 1, m - k)


def verify_alt_binomial_2(n: int, m: int, k: int) -> tuple[int, int]:
    """Both sides of ``sum_{i=0}^n (-1)^{n-i} C(m+i, k) C(n, i) = C(m, k-n)``."""
    if min(n, m, k) < 0:
        raise ValueError("verify_alt_binomial_2 requires n, m, k >= 0")
    lhs = sum((-1) ** (n - i) * binomial(m + i, k) * binomial(n, i) for i in range(n + 1))
    return lhs, binomial(m, k - n)


def catalan_composition_sum(n: int, k: int) -> int:
    """Closed form of ``sum over i_1+..+i_k = n (i_j >= 0) of C_{i_1}...C_{i_k}``."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    num = k * factorial(2 * n + k - 1)
    den = factorial(n) * factorial(n + k)
    q, rem = divmod(num, den)
    assert rem == 0
    return q


def catalan_composition_sum_brute(n: int, k: int) -> int:
    cat = [catalan(i) for i in range(n + 1)]
    return sum(math.prod(cat[i] for i in comp) for comp in weak_compositions(n, k))


def fuss_catalan_composition_sum(k: int, m: int, t: int) -> Fraction:
    """Closed form ``(t/k) C((m+1)k, k-t)`` of the Fuss-Catalan composition sum.

    The sum runs over ``i_1+..+i_t = k`` with every ``i_j >= 1`` of
    ``C(i_1, m) ... C(i_t, m)``.
    """
    if not 1 <= t <= k:
        raise ValueError(f"need 1 <= t <= k, got t={t}, k={k}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    return Fraction(t, k) * binomial((m + 1) * k, k - t)


def fuss_catalan_composition_sum_brute(k: int, m: int, t: int) -> int:
    fc = [fuss_catalan(i, m) for i in range(k + 1)]
    return sum(math.prod(fc[i] for i in comp) for comp in compositions(k, t))


def verify_key_identity(m: int, s: int, k: int, a_sum: int, b: int) -> tuple[int, int]:
    """Both sides of the alternating identity that drives the chain induction.

    ``sum_{c=1}^k (-1)^{c+b-k-1} C(b+c-2, k-1) C((m-s+1)k, a_sum-(s-1)k-c)``
    against ``C((m-s)k, mk-(a_sum+b)+1)``.
    """
    if not (0 <= s <= m and 1 <= b <= k):
        raise ValueError(f"need 0 <= s <= m and 1 <= b <= k, got m={m}, s={s}, b={b}, k={k}")
    top = (m - s + 1) * k
    lhs = 0
    for c in range(1, k + 1):
        lhs += (-1) ** (c + b - k - 1) * binomial(b + c - 2, k - 1) * binomial(
            top, a_sum - (s - 1) * k - c
        )
    return lhs, binomial((m - s) * k, m * k - (a_sum + b) + 1)


def product_shift_sum(sizes: Sequence[int], s: int) -> int:
    """Closed form ``(k-p)(k-p-1)...(k-p-s+1)`` with ``k = sum(sizes)``, ``p = len(sizes)``."""
    k, p = sum(sizes), len(sizes)
    if s < 0 or s > k - p:
        raise ValueError(f"need 0 <= s <= k - p = {k - p}, got s={s}")
    return falling_factorial(k - p, s)


def product_shift_sum_brute(sizes: Sequence[int], s: int) -> int:
    """Sum over all index tuples in ``[p]^s`` of ``prod_j (x_{i_j} - #{l <= j : i_l = i_j})``."""
    total = 0
    for idx in itertools.product(range(len(sizes)), repeat=s):
        seen: Counter[int] = Counter()
        term = 1
        for i in idx:
            seen[i] += 1
            term *= sizes[i] - seen[i]
            if term == 0:
                break
        total += term
    return total
