"""Property-based tests over the invariants of each module."""

import itertools
from fractions import Fraction
from functools import lru_cache

from hypothesis import given, settings, strategies as st

from freemix import combinat, freeprob, ncp, rmt
from freemix.freeprob import ChainSpec, MomentSequence
from freemix.ncp import PartitionTypeVector, SetPartition


@lru_cache(maxsize=None)
def nc_list(k):
    return tuple(ncp.enumerate_nc(k))


nc_partitions = st.integers(1, 9).flatmap(lambda k: st.sampled_from(nc_list(k)))


@st.composite
def set_partitions(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    blocks = {}
    for i, lab in enumerate(labels, start=1):
        blocks.setdefault(lab, []).append(i)
    return SetPartition.from_blocks(blocks.values(), n)


@st.composite
def type_vectors(draw, k_min=1, k_max=7):
    k = draw(st.integers(k_min, k_max))
    return draw(st.sampled_from(ncp.type_vectors(k)))


small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=5)
positive_fractions = st.fractions(min_value=Fraction(1, 5), max_value=20, max_denominator=5)


def even_sequences(k):
    return st.lists(positive_fractions, min_size=k - 1, max_size=k - 1).map(
        lambda xs: MomentSequence(tuple([Fraction(1)] + xs))
    )


def rotate(p, shift):
    n = p.n
    return SetPartition.from_blocks([[(x - 1 + shift) % n + 1 for x in b] for b in p.blocks], n)


# combinat ------------------------------------------------------------------


@given(st.integers(0, 60), st.integers(-3, 63))
def test_binomial_symmetry_and_pascal(n, r):
    if 0 <= r <= n:
        assert combinat.binomial(n, r) == combinat.binomial(n, n - r)
    if n >= 1:
        assert combinat.binomial(n, r) == combinat.binomial(n - 1, r - 1) * (r >= 1) + combinat.binomial(n - 1, r)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.integers(0, 3))
def test_product_shift_sum(sizes, s):
    if s <= sum(sizes) - len(sizes):
        assert combinat.product_shift_sum(sizes, s) == combinat.product_shift_sum_brute(sizes, s)


@given(st.integers(1, 12), st.integers(0, 11), st.integers(0, 11))
def test_alt_binomial_1(n, m, k):
    if k <= m < n:
        lhs, rhs = combinat.verify_alt_binomial_1(n, m, k)
        assert lhs == rhs


@given(st.integers(0, 5), st.integers(1, 5), st.integers(1, 5), st.data())
def test_key_identity(s, extra, k, data):
    m = s + extra
    a_sum = data.draw(st.integers(s, max(s, s * k)))
    b = data.draw(st.integers(1, k))
    lhs, rhs = combinat.verify_key_identity(m, s, k, a_sum, b)
    assert lhs == rhs


# ncp -----------------------------------------------------------------------


@given(set_partitions())
def test_noncrossing_predicate_matches_definition(p):
    idx = p.block_index()
    crossing = any(
        idx[a] == idx[c] and idx[b] == idx[d] and idx[a] != idx[b]
        for a, b, c, d in itertools.combinations(range(1, p.n + 1), 4)
    )
    assert ncp.is_noncrossing(p) == (not crossing)


@given(nc_partitions)
def test_kreweras_invariants(p):
    kp = ncp.kreweras_complement(p)
    assert len(p) + len(kp) == p.n + 1
    assert ncp.is_noncrossing(kp)
    assert ncp.is_noncrossing(ncp.interleave_pair(p, kp))
    # applying the complement twice rotates by one step
    assert ncp.kreweras_complement(kp) == rotate(p, -1)


@given(nc_partitions)
def test_quotient_sizes(p):
    sizes = ncp.quotient_cycle_sizes(p)
    assert sum(sizes) == p.n
    assert len(sizes) == p.n - len(p) + 1
    assert sizes == sorted(ncp.kreweras_complement(p).block_sizes(), reverse=True)


@given(nc_partitions, st.integers(0, 8))
def test_counts_rotation_invariant(p, shift):
    q = rotate(p, shift)
    assert ncp.is_noncrossing(q)
    assert ncp.type_vector(q) == ncp.type_vector(p)
    assert ncp.quotient_cycle_sizes(q) == ncp.quotient_cycle_sizes(p)


@given(type_vectors(k_max=9))
def test_type_vector_round_trip(al):
    assert PartitionTypeVector.from_parts(al.parts(), al.k) == al
    assert PartitionTypeVector.parse(str(al)) == al
    assert ncp.count_nc_by_type(al) >= 1


@given(type_vectors(k_max=4), st.integers(1, 3))
def test_generalized_count_s1(al, m):
    assert ncp.count_np_general([al], m) == ncp.count_nc_scaled(al, m)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_generalized_count_brute(k, data):
    m = data.draw(st.integers(1, 9 // k))
    s = data.draw(st.integers(1, min(m, 3)))
    alphas = [data.draw(st.sampled_from(ncp.type_vectors(k))) for _ in range(s)]
    c = data.draw(st.integers(1, k))
    assert ncp.count_np_general_brute(alphas, m) == ncp.count_np_general(alphas, m)
    assert ncp.count_np_general_cgon_brute(alphas, m, c) == ncp.count_np_general_cgon(alphas, m, c)


# freeprob ------------------------------------------------------------------


@given(st.integers(1, 6).flatmap(lambda k: st.tuples(st.sampled_from(ncp.type_vectors(k)),
                                                     st.sampled_from(ncp.type_vectors(k)))))
def test_coefficient_symmetry_and_sign(pair):
    al, be = pair
    c = freeprob.coefficient(al, be)
    assert c == freeprob.coefficient(be, al)
    assert c == freeprob.sign(al.k, al.a, be.a) * freeprob.pair_catalan_sum(al, be)
    if al.a + be.a <= al.k:
        assert c == 0


@settings(max_examples=30, deadline=None)
@given(even_sequences(5), even_sequences(5))
def test_op_r_commutative_and_unit(x, y):
    assert freeprob.op_r(x, y) == freeprob.op_r(y, x)
    assert freeprob.op_r(x, MomentSequence.constant(5)) == x
    assert freeprob.op_r(x, y).even_moments[0] == 1


@settings(max_examples=15, deadline=None)
@given(even_sequences(4), even_sequences(4), even_sequences(4))
def test_op_r_associative(x, y, z):
    assert freeprob.op_r(freeprob.op_r(x, y), z) == freeprob.op_r(x, freeprob.op_r(y, z))


@settings(max_examples=20, deadline=None)
@given(st.lists(small_fractions, min_size=5, max_size=5), st.lists(small_fractions, min_size=5, max_size=5))
def test_free_product_matches_oracle(a, b):
    ga, gb = freeprob.GeneralMomentSequence(tuple(a)), freeprob.GeneralMomentSequence(tuple(b))
    assert freeprob.free_product_moments(ga, gb, 5) == freeprob.cumulant_oracle_product_moments(ga, gb, 5)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 4), st.data())
def test_chain_routes_agree(m, data):
    s = data.draw(st.integers(0, m))
    tail = tuple(data.draw(even_sequences(4)) for _ in range(s))
    chain = ChainSpec(m, tail)
    assert freeprob.chain_moments_inductive(chain, 4) == freeprob.chain_moments_closed(chain, 4)


@given(st.integers(0, 4), st.integers(0, 4))
def test_zm_compose(m, mp):
    assert freeprob.zm_compose(m, mp, 6) == freeprob.zm_moments(m + mp, 6)


@given(st.lists(positive_fractions, min_size=1, max_size=6), st.text(max_size=8))
def test_moment_json_round_trip(values, label):
    seq = MomentSequence(tuple(values), label)
    back = MomentSequence.from_json(seq.to_json())
    assert back == seq and back.label == label


# rmt -----------------------------------------------------------------------


@given(st.floats(-10, 10), st.floats(0, 2), st.floats(-10, 10), st.floats(0, 0.5), st.floats(0, 0.5))
def test_compare_monotone_in_tolerance(est, se, exact, t1, t2):
    lo, hi = sorted((t1, t2))
    (a,) = rmt.compare([est], [se], [exact], lo)
    (b,) = rmt.compare([est], [se], [exact], hi)
    assert b.passed or not a.passed
