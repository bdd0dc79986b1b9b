"""Exhaustive exact checks behind ``freemix verify``.

Each check sweeps a parameter range, stops at the first disagreement and
reports it in full.  Library functions are looked up through their modules
at call time, so a patched function is what gets checked.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from freemix import combinat, freeprob, ncp

__all__ = ["CheckResult", "SUITES", "DEFAULT_KMAX", "run_suite", "run_check"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    counterexample: dict | None = None
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "counterexample": self.counterexample,
            "seconds": round(self.seconds, 3),
        }


# A check yields (case description, got, expected); the runner compares.
Case = tuple[dict, object, object]


def _jsonable(x: object) -> object:
    if isinstance(x, Fraction):
        return freeprob.format_rational(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, ncp.PartitionTypeVector):
        return str(x)
    if isinstance(x, ncp.SetPartition):
        return x.to_json()
    if isinstance(x, freeprob.MomentSequence):
        return [_jsonable(v) for v in x.even_moments]
    return x


def run_check(name: str, cases: Iterator[Case]) -> CheckResult:
    start = time.perf_counter()
    n = 0
    for params, got, want in cases:
        n += 1
        if got != want:
            ce = {k: _jsonable(v) for k, v in params.items()}
            ce["got"] = _jsonable(got)
            ce["expected"] = _jsonable(want)
            return CheckResult(name, False, n, ce, time.perf_counter() - start)
    return CheckResult(name, True, n, None, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def _alt_binomial_1(kmax: int) -> Iterator[Case]:
    for n in range(1, min(12, kmax + 4) + 1):
        for m in range(n):
            for k in range(m + 1):
                lhs, rhs = combinat.verify_alt_binomial_1(n, m, k)
                yield {"n": n, "m": m, "k": k}, lhs, rhs


def _alt_binomial_2(kmax: int) -> Iterator[Case]:
    top = min(10, kmax + 2)
    for n, m, k in itertools.product(range(top + 1), repeat=3):
        lhs, rhs = combinat.verify_alt_binomial_2(n, m, k)
        yield {"n": n, "m": m, "k": k}, lhs, rhs


def _catalan_composition(kmax: int) -> Iterator[Case]:
    for n in range(min(8, kmax) + 1):
        for k in range(1, min(6, kmax) + 1):
            yield (
                {"n": n, "k": k},
                combinat.catalan_composition_sum(n, k),
                combinat.catalan_composition_sum_brute(n, k),
            )


def _fuss_catalan_composition(kmax: int) -> Iterator[Case]:
    for k in range(1, min(6, kmax) + 1):
        for m in range(4):
            for t in range(1, k + 1):
                yield (
                    {"k": k, "m": m, "t": t},
                    combinat.fuss_catalan_composition_sum(k, m, t),
                    combinat.fuss_catalan_composition_sum_brute(k, m, t),
                )


def _key_identity(kmax: int) -> Iterator[Case]:
    for m in range(1, 5):
        for s in range(m):
            for k in range(1, min(5, kmax) + 1):
                for a_sum in range(s, s * k + 1):
                    for b in range(1, k + 1):
                        lhs, rhs = combinat.verify_key_identity(m, s, k, a_sum, b)
                        yield {"m": m, "s": s, "k": k, "a_sum": a_sum, "b": b}, lhs, rhs


def _product_shift(kmax: int) -> Iterator[Case]:
    for k in range(1, min(7, kmax) + 1):
        for p in range(1, k + 1):
            for sizes in combinat.compositions(k, p):
                if list(sizes) != sorted(sizes, reverse=True):
                    continue
                for s in range(min(3, k - p) + 1):
                    yield (
                        {"sizes": list(sizes), "s": s},
                        combinat.product_shift_sum(sizes, s),
                        combinat.product_shift_sum_brute(sizes, s),
                    )


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------


def _nc_counts(kmax: int) -> Iterator[Case]:
    for k in range(1, min(9, kmax) + 1):
        by_type = Counter(ncp.type_vector(p) for p in ncp.enumerate_nc(k))
        for al in ncp.type_vectors(k):
            yield {"alpha": al}, by_type.get(al, 0), ncp.count_nc_by_type(al)
        yield {"k": k, "total": True}, sum(by_type.values()), combinat.catalan(k)


def _kreweras_duality(kmax: int) -> Iterator[Case]:
    for k in range(1, min(9, kmax) + 1):
        for p in ncp.enumerate_nc(k):
            sizes = ncp.quotient_cycle_sizes(p)
            kp = ncp.kreweras_complement(p)
            got = (sizes, len(sizes), sum(sizes), len(p) + len(kp))
            want = (sorted(kp.block_sizes(), reverse=True), k - len(p) + 1, k, k + 1)
            yield {"partition": p}, got, want


def _single_catalan(kmax: int) -> Iterator[Case]:
    for k in range(1, min(9, kmax) + 1):
        for al in ncp.type_vectors(k):
            yield {"alpha": al}, freeprob.single_catalan_sum_brute(al), freeprob.single_catalan_sum(al)


def _pair_catalan(kmax: int) -> Iterator[Case]:
    for k in range(1, min(7, kmax) + 1):
        for al, be in itertools.product(ncp.type_vectors(k), repeat=2):
            yield (
                {"alpha": al, "beta": be},
                freeprob.pair_catalan_sum_brute(al, be),
                freeprob.pair_catalan_sum(al, be),
            )


def _generalized_counts(kmax: int) -> Iterator[Case]:
    top = min(12, kmax + 3)
    for m in range(1, top + 1):
        for k in range(1, top // m + 1):
            tvs = ncp.type_vectors(k)
            for s in range(1, min(m, 3) + 1):
                for alphas in itertools.product(tvs, repeat=s):
                    params = {"m": m, "alphas": list(alphas)}
                    yield params, ncp.count_np_general_brute(alphas, m), ncp.count_np_general(alphas, m)
                    for c in range(1, k + 1):
                        yield (
                            dict(params, c=c),
                            ncp.count_np_general_cgon_brute(alphas, m, c),
                            ncp.count_np_general_cgon(alphas, m, c),
                        )


def _generalized_enumeration(kmax: int) -> Iterator[Case]:
    """The yielding enumerator agrees with the memoized count, and every member is non-crossing."""
    top = min(8, kmax)
    for m in range(1, top + 1):
        for k in range(1, top // m + 1):
            for s in range(1, min(m, 3) + 1):
                for alphas in itertools.product(ncp.type_vectors(k), repeat=s):
                    fam = list(ncp.enumerate_np_general(alphas, m))
                    ok = all(ncp.is_noncrossing(p) for p in fam) and len(set(fam)) == len(fam)
                    yield {"m": m, "alphas": list(alphas)}, (len(fam), ok), (ncp.count_np_general(alphas, m), True)


def _labeled_counts(kmax: int) -> Iterator[Case]:
    for k in range(1, min(7, kmax) + 1):
        for al in ncp.type_vectors(k):
            p = k - al.a + 1
            seen = set()
            for comp in combinat.compositions(k, p):
                x = tuple(sorted(comp, reverse=True))
                if x in seen:
                    continue
                seen.add(x)
                yield (
                    {"alpha": al, "x": list(x)},
                    ncp.count_nc_by_regions_brute(al, x),
                    ncp.count_nc_by_regions(al, x),
                )


def _labeled_pair_counts(kmax: int) -> Iterator[Case]:
    for k in range(1, min(5, kmax) + 1):
        for al, be in itertools.product(ncp.type_vectors(k), repeat=2):
            p = 2 * k - al.a - be.a + 1
            if p < 1:
                continue
            seen = set()
            for comp in combinat.compositions(k, p):
                x = tuple(sorted(comp, reverse=True))
                if x in seen:
                    continue
                seen.add(x)
                yield (
                    {"alpha": al, "beta": be, "x": list(x)},
                    ncp.labeled_count_ax_pair_brute(al, be, x),
                    ncp.labeled_count_ax_pair(al, be, x),
                )


# ---------------------------------------------------------------------------
# freeprob
# ---------------------------------------------------------------------------


def _rand_general(rng: random.Random, k: int) -> freeprob.GeneralMomentSequence:
    vals = [Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(k)]
    return freeprob.GeneralMomentSequence(tuple(vals))


def _rand_even(rng: random.Random, k: int) -> freeprob.MomentSequence:
    vals = [Fraction(1)] + [Fraction(rng.randint(1, 40), rng.randint(1, 4)) for _ in range(k - 1)]
    return freeprob.MomentSequence(tuple(vals))


def _oracle_equivalence(kmax: int, seed: int = 0) -> Iterator[Case]:
    rng = random.Random(seed)
    k = min(7, kmax)
    for trial in range(50):
        a, b = _rand_general(rng, k), _rand_general(rng, k)
        yield (
            {"trial": trial, "a": list(a.moments), "b": list(b.moments)},
            freeprob.free_product_moments(a, b, k),
            freeprob.cumulant_oracle_product_moments(a, b, k),
        )


def _op_r_algebra(kmax: int, seed: int = 0) -> Iterator[Case]:
    rng = random.Random(seed + 1)
    kc, ka = min(6, kmax), min(5, kmax)
    for trial in range(10):
        x, y, z = (_rand_even(rng, kc) for _ in range(3))
        yield (
            {"law": "commutativity", "trial": trial, "x": x, "y": y},
            freeprob.op_r(x, y, kc),
            freeprob.op_r(y, x, kc),
        )
        yield (
            {"law": "associativity", "trial": trial, "x": x, "y": y, "z": z},
            freeprob.op_r(freeprob.op_r(x, y, ka), z, ka),
            freeprob.op_r(x, freeprob.op_r(y, z, ka), ka),
        )


def _closed_form_coherence(kmax: int, seed: int = 0) -> Iterator[Case]:
    rng = random.Random(seed + 2)
    k = min(8, kmax + 1)
    for m in range(5):
        om = _rand_even(rng, k)
        yield (
            {"route": "zm_convolve_closed", "m": m, "omega": om},
            freeprob.op_r(freeprob.zm_moments(m, k), om, k),
            freeprob.zm_convolve_closed(m, om, k),
        )
    for m in range(7):
        for mp in range(7 - m):
            got = freeprob.zm_convolve_closed(m, freeprob.zm_moments(mp, k), k)
            yield {"route": "zm_compose", "m": m, "m_prime": mp}, got, freeprob.zm_moments(m + mp, k)
    kc = min(6, kmax)
    for m in range(5):
        for s in range(m + 1):
            chain = freeprob.ChainSpec(m, tuple(_rand_even(rng, kc) for _ in range(s)))
            yield (
                {"route": "chain", "m": m, "s": s, "tail": list(chain.tail)},
                freeprob.chain_moments_inductive(chain, kc),
                freeprob.chain_moments_closed(chain, kc),
            )


def _b_convolution(kmax: int, seed: int = 0) -> Iterator[Case]:
    rng = random.Random(seed + 3)
    top = min(5, kmax)
    for m in range(4):
        for s in range(min(2, m) + 1):
            chain = freeprob.ChainSpec(m, tuple(_rand_even(rng, top) for _ in range(s)))
            for k in range(1, top + 1):
                for c in range(1, min(3, k) + 1):
                    yield (
                        {"m": m, "s": s, "k": k, "c": c, "tail": list(chain.tail)},
                        freeprob.b_convolution_lhs(chain, k, c),
                        freeprob.b_convolution_rhs(chain, k, c),
                    )


def _coefficient_symmetry(kmax: int) -> Iterator[Case]:
    for k in range(1, min(7, kmax) + 1):
        for al, be in itertools.product(ncp.type_vectors(k), repeat=2):
            c = freeprob.coefficient(al, be)
            want_sign = freeprob.sign(k, al.a, be.a) * freeprob.pair_catalan_sum(al, be)
            yield {"alpha": al, "beta": be}, (c, c), (freeprob.coefficient(be, al), want_sign)


CheckFn = Callable[[int], Iterator[Case]]

SUITES: dict[str, dict[str, CheckFn]] = {
    "identities": {
        "alt_binomial_1": _alt_binomial_1,
        "alt_binomial_2": _alt_binomial_2,
        "catalan_composition_sum": _catalan_composition,
        "fuss_catalan_composition_sum": _fuss_catalan_composition,
        "key_identity": _key_identity,
        "product_shift_sum": _product_shift,
    },
    "partitions": {
        "nc_counts_by_type": _nc_counts,
        "kreweras_quotient_duality": _kreweras_duality,
        "single_catalan_sum": _single_catalan,
        "pair_catalan_sum": _pair_catalan,
        "generalized_counts": _generalized_counts,
        "generalized_enumeration": _generalized_enumeration,
        "labeled_counts": _labeled_counts,
        "labeled_pair_counts": _labeled_pair_counts,
    },
    "freeprob": {
        "coefficient_symmetry": _coefficient_symmetry,
        "oracle_equivalence": _oracle_equivalence,
        "op_r_algebra": _op_r_algebra,
        "closed_form_coherence": _closed_form_coherence,
        "b_convolution": _b_convolution,
    },
}

DEFAULT_KMAX = {"identities": 8, "partitions": 9, "freeprob": 7}


def run_suite(
    suite: str, kmax: int | None = None, on_result: Callable[[CheckResult], None] | None = None
) -> list[CheckResult]:
    """Run one suite (or ``"all"``) and return a result per check."""
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    out = []
    for name in names:
        limit = DEFAULT_KMAX[name] if kmax is None else kmax
        for check_name, fn in SUITES[name].items():
            res = run_check(f"{name}.{check_name}", fn(limit))
            out.append(res)
            if on_result is not None:
                on_result(res)
    return out
