import math
from fractions import Fraction
from itertools import product as iproduct

import pytest

from mmphf_lab.errors import CorruptIndexError, SchemeViolationError
from mmphf_lab.graphs import ConflictSpec
from mmphf_lab.mmphf import (
    SCHEME_BROKEN,
    SCHEME_EXPLICIT_SET,
    SCHEME_RANK_MAP,
    SCHEMES,
    BitString,
    KeySet,
    MmphfIndex,
    bound_report,
    build,
    decode_bitstring,
    encode_bitstring,
    extract_coloring,
    keyset_from_text,
    keyset_to_text,
    parameterize,
    query,
    size_lower_bound_bits,
)
from mmphf_lab.rng import BitSampler
from mmphf_lab.tower import Pow2, ScaledPow2, parse_tower, pow2


EXAMPLE = KeySet(elements=(2, 3, 6, 7), u=8)


class TestKeySet:
    def test_validation(self):
        with pytest.raises(ValueError):
            KeySet(elements=(), u=4)
        with pytest.raises(ValueError):
            KeySet(elements=(3, 3), u=4)
        with pytest.raises(ValueError):
            KeySet(elements=(1, 9), u=8)

    def test_rank(self):
        assert [EXAMPLE.rank(q) for q in (2, 3, 6, 7)] == [0, 1, 2, 3]
        assert EXAMPLE.rank(5) == 2

    def test_text_roundtrip(self):
        text = keyset_to_text(EXAMPLE)
        assert text.splitlines()[0] == "u=8"
        assert keyset_from_text(text) == EXAMPLE

    def test_text_header_required(self):
        with pytest.raises(ValueError):
            keyset_from_text("1\n2\n")


class TestSchemes:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_member_queries_exact(self, scheme):
        idx = build(scheme, EXAMPLE, seed=9)
        assert [query(idx, e) for e in EXAMPLE.elements] == [0, 1, 2, 3]

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_monotone_minimal_on_random_sets(self, scheme):
        rng = BitSampler(31337)
        for _ in range(30):
            u = 8 + rng.choice_index(40)
            n = 1 + rng.choice_index(min(u, 12))
            pool = sorted(set(1 + rng.choice_index(u) for _ in range(n)))
            keys = KeySet(elements=tuple(pool), u=u)
            idx = build(scheme, keys, seed=rng.choice_index(1 << 32))
            assert [query(idx, e) for e in keys.elements] == list(range(keys.n))

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_nonmember_in_range(self, scheme):
        idx = build(scheme, EXAMPLE, seed=0)
        for q in (1, 4, 5, 8):
            assert 0 <= query(idx, q) <= 3

    def test_query_outside_universe(self):
        idx = build(SCHEME_EXPLICIT_SET, EXAMPLE)
        with pytest.raises(ValueError):
            query(idx, 0)
        with pytest.raises(ValueError):
            query(idx, 9)

    def test_explicit_set_payload_is_combinatorial_bits(self):
        idx = build(SCHEME_EXPLICIT_SET, KeySet(elements=(2, 3), u=8))
        assert idx.size_bits == math.ceil(math.log2(math.comb(8, 2))) == 5
        assert idx.total_bits == idx.size_bits + idx.header_bits

    def test_rank_map_seeds_change_payload_not_answers(self):
        i1 = build(SCHEME_RANK_MAP, EXAMPLE, seed=1)
        i2 = build(SCHEME_RANK_MAP, EXAMPLE, seed=2)
        assert [query(i1, e) for e in EXAMPLE.elements] == [
            query(i2, e) for e in EXAMPLE.elements
        ]

    def test_rank_map_size_regime(self):
        keys = KeySet(elements=tuple(range(2, 42, 2)), u=64)  # n = 20
        idx = build(SCHEME_RANK_MAP, keys, seed=3)
        # displacement widths and rank slots are O(n log n) bits
        assert idx.size_bits <= 40 * (keys.n.bit_length() + 6)

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            build("nope", EXAMPLE)


class TestBitString:
    def test_properties(self):
        b = BitString(0b101, 3)
        assert b.to01() == "101"
        assert b.slice_int(0, 1) == 1 and b.slice_int(1, 2) == 0b01

    def test_validation(self):
        with pytest.raises(ValueError):
            BitString(8, 3)


class TestEncodeDecode:
    def test_encode_example(self):
        assert encode_bitstring((1, 0)).elements == (2, 3, 6, 7)

    def test_encode_all_zeros(self):
        ks = encode_bitstring((0, 0, 0))
        assert ks.elements == (3, 4, 6, 7, 9, 10)
        assert [ks.rank(3 * i) for i in (1, 2, 3)] == [0, 2, 4]

    def test_encode_all_ones(self):
        ks = encode_bitstring((1, 1, 1))
        assert ks.elements == (2, 3, 5, 6, 8, 9)
        assert [ks.rank(3 * i) for i in (1, 2, 3)] == [1, 3, 5]

    def test_anchor_rank_formula(self):
        for bits in iproduct((0, 1), repeat=4):
            ks = encode_bitstring(bits)
            for i, b in enumerate(bits, start=1):
                assert ks.rank(3 * i) == 2 * (i - 1) + b

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_roundtrip_small(self, scheme):
        for d in range(1, 7):
            for bits in iproduct((0, 1), repeat=d):
                idx = build(scheme, encode_bitstring(bits), seed=5)
                assert decode_bitstring(idx, d) == bits

    def test_corrupt_index_detected(self):
        bad = MmphfIndex(SCHEME_BROKEN, 4, 7, None, BitString(0, 1))
        with pytest.raises(CorruptIndexError):
            decode_bitstring(bad, 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            encode_bitstring(())


class TestExtractColoring:
    def test_explicit_set_injective_on_conflict_2_4(self):
        colors = extract_coloring(SCHEME_EXPLICIT_SET, ConflictSpec(2, 4))
        assert len(set(colors.values())) == 6

    def test_rank_map_proper_on_conflict_2_8(self):
        colors = extract_coloring(SCHEME_RANK_MAP, ConflictSpec(2, 8), seed=11)
        assert len(colors) == 28

    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize(
        "m,M", [(2, 5), (2, 6), (2, 7), (2, 8), (3, 4), (3, 5), (3, 6)]
    )
    def test_proper_coloring_sweep(self, scheme, m, M):
        # extract_coloring raises on any monochromatic edge, so returning at
        # all certifies a proper coloring of the whole graph
        colors = extract_coloring(scheme, ConflictSpec(m, M), seed=29)
        assert len(colors) == math.comb(M, m)

    def test_broken_scheme_caught(self):
        with pytest.raises(SchemeViolationError):
            extract_coloring(SCHEME_BROKEN, ConflictSpec(2, 4))


class TestBoundReport:
    def test_conflict_2_4_explicit_set(self):
        rep = bound_report(SCHEME_EXPLICIT_SET, ConflictSpec(2, 4))
        assert rep.chi == 2 and rep.chi_f == 2
        assert rep.lower_bound_bits == -0.5
        stats = rep.schemes[SCHEME_EXPLICIT_SET]
        assert stats.distinct == 6 and stats.distinct >= rep.chi

    def test_hypothetical_formula(self):
        assert size_lower_bound_bits(Fraction(16)) == 1.0

    def test_counting_chain_on_conflict_2_8(self):
        for scheme in SCHEMES:
            rep = bound_report(scheme, ConflictSpec(2, 8), seed=2)
            stats = rep.schemes[scheme]
            assert stats.distinct >= rep.chi >= rep.chi_f
            assert stats.max_bits >= stats.mean_bits

    def test_json(self):
        rep = bound_report(SCHEME_EXPLICIT_SET, ConflictSpec(2, 4))
        data = rep.to_json_dict()
        assert data["chi_f"] == "2/1"
        assert SCHEME_EXPLICIT_SET in data["schemes"]


class TestParameterize:
    def test_worked_example(self):
        fp = parameterize(1024, parse_tower("2^2^64"))
        assert fp.m == 2 and fp.k == 512
        assert fp.u_prime == ScaledPow2(512, 64)  # 512 * 2^64 = 2^73
        assert fp.u_prime_le_u and fp.m_le_sqrt_n

    def test_domain_guards(self):
        with pytest.raises(ValueError):
            parameterize(1, pow2(100))
        with pytest.raises(ValueError):
            parameterize(16, 3)  # log2 log2 u < 1

    def test_m_monotone_in_u(self):
        ms = [
            parameterize(10**6, Pow2(Pow2(b))).m
            for b in (6, 64, 730, 4100, 20000)
        ]
        assert ms == sorted(ms)
        assert ms[0] >= 1

    def test_sqrt_check_within_supported_range(self):
        # u <= 2^(n^(n^2+n)) keeps m <= sqrt(n); sample exact cases
        for n in (4, 8, 16, 32):
            exponent = n ** (n * n + n)
            fp = parameterize(n, pow2(exponent))
            assert fp.m_le_sqrt_n

    def test_u_prime_flag_exact_boundary(self):
        fp = parameterize(4, pow2(pow2(64)))
        # m = 2, k = 2, u' = 2 * 2^64 = 2^65 <= 2^(2^64)
        assert fp.m == 2 and fp.k == 2
        assert fp.u_prime_le_u

    def test_json(self):
        data = parameterize(1024, parse_tower("2^2^64")).to_json_dict()
        assert data["m"] == 2 and data["u_prime"] == "512*2^64"
