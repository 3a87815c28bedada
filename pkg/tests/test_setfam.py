"""Cross-Oddtown families: verifiers, tensors, certificates, enumeration."""

import itertools

import pytest

from flatrank.field import GF2
from flatrank.rng import Rng
from flatrank.setfam import (
    SetFamily,
    TupleFamily,
    cross_oddtown_bound,
    enumerate_cross_oddtown,
    fast_chain_check,
    intersection_size,
    is_cross_oddtown,
    odd_tuple_candidates,
    oddtown_rank1_certificate,
    oddtown_tensor,
    reconstruct_from_certificate,
    repeated_singleton_family,
    singleton_diagonal_family,
    verify_oddtown_chain,
)
from flatrank.tensor import is_semi_diagonal, max_flattening_rank


def test_intersection_size_examples():
    assert intersection_size([0b111]) == 3
    assert intersection_size([0b011, 0b110]) == 1
    with pytest.raises(ValueError):
        intersection_size([])


def test_intersection_size_random_against_membership_loop():
    rng = Rng(5)
    n = 10
    for _ in range(50):
        masks = [rng.next_below(1 << n) for _ in range(4)]
        direct = sum(1 for e in range(n) if all((m >> e) & 1 for m in masks))
        assert intersection_size(masks) == direct


def test_singleton_diagonal_family_is_oddtown():
    fam = singleton_diagonal_family(5, 2)
    assert is_cross_oddtown(fam)
    assert len(fam) == 5 == cross_oddtown_bound(5, 2)


def test_repeated_singletons_attain_bound():
    fam = repeated_singleton_family(4, 3)
    assert is_cross_oddtown(fam)
    assert len(fam) == 8 == cross_oddtown_bound(4, 3)


def test_cross_condition_violation():
    # two pairs sharing exactly one element across the cross pattern
    fam = TupleFamily(n=3, d=2, members=((0b001, 0b001), (0b011, 0b010)))
    # |A1(1) ∩ A2(2)| = |{0} ∩ {1}| = 0 even, |A2(1) ∩ A1(2)| = |{0,1} ∩ {0}| = 1 odd
    assert not is_cross_oddtown(fam)


def test_repeat_same_pair_violates_d2():
    tup = (0b001, 0b001)
    assert is_cross_oddtown(TupleFamily(n=1, d=2, members=(tup,)))
    assert not is_cross_oddtown(TupleFamily(n=1, d=2, members=(tup, tup)))


def test_oddtown_tensor_identity_for_singletons():
    fam = singleton_diagonal_family(3, 2)
    t = oddtown_tensor(fam)
    assert t.entries == (1, 0, 0, 0, 1, 0, 0, 0, 1)
    assert t.field == GF2


def test_oddtown_tensor_matches_parity_oracle():
    rng = Rng(9)
    n, d, m = 4, 3, 5
    members = tuple(tuple(rng.next_below(1 << n) for _ in range(d)) for _ in range(m))
    fam = TupleFamily(n=n, d=d, members=members)
    t = oddtown_tensor(fam)
    for idx in itertools.product(range(m), repeat=d):
        masks = [members[idx[j]][j] for j in range(d)]
        parity = intersection_size(masks) % 2
        assert t.get(idx) == parity


def test_oddtown_tensor_semi_diagonal_for_oddtown_families():
    for fam in (singleton_diagonal_family(4, 2), repeated_singleton_family(3, 3)):
        assert is_semi_diagonal(oddtown_tensor(fam))


def test_certificate_reconstructs_any_family():
    rng = Rng(31)
    for trial in range(20):
        n = 1 + rng.next_below(4)
        d = 2 + rng.next_below(2)
        m = 1 + rng.next_below(5)
        members = tuple(tuple(rng.next_below(1 << n) for _ in range(d)) for _ in range(m))
        fam = TupleFamily(n=n, d=d, members=members)
        cert = oddtown_rank1_certificate(fam)
        assert len(cert) == n
        assert reconstruct_from_certificate(cert, m, d) == oddtown_tensor(fam)


def test_certificate_caps_mfrank_at_n():
    fam = repeated_singleton_family(3, 3)
    t = oddtown_tensor(fam)
    assert max_flattening_rank(t) <= fam.n
    chain = verify_oddtown_chain(fam)
    assert chain["verified"]
    assert chain["mfrank_le_n"] and chain["certificate_reconstructs"]


def test_bound_formula():
    assert cross_oddtown_bound(5, 2) == 5
    assert cross_oddtown_bound(5, 3) == 10
    assert cross_oddtown_bound(1, 2) == 1
    with pytest.raises(ValueError):
        cross_oddtown_bound(0, 2)


def test_enumeration_agrees_with_direct_checker():
    seen = 0
    for members in itertools.islice(enumerate_cross_oddtown(3, 3, 4), 0, 3000, 37):
        fam = TupleFamily(n=3, d=3, members=members)
        assert is_cross_oddtown(fam)
        seen += 1
    assert seen > 10


@pytest.mark.parametrize("n,d,cap", [(2, 2, 3), (2, 3, 4), (1, 3, 3)])
def test_enumeration_is_complete_for_tiny_cases(n, d, cap):
    # independent population check: enumerate all multisets of candidates
    # directly and compare against the bitset DFS
    cands = odd_tuple_candidates(n, d)
    brute = set()
    for size in range(1, cap + 1):
        for combo in itertools.combinations_with_replacement(range(len(cands)), size):
            members = tuple(cands[i] for i in combo)
            if is_cross_oddtown(TupleFamily(n=n, d=d, members=members)):
                brute.add(members)
    dfs = set(enumerate_cross_oddtown(n, d, cap))
    assert dfs == brute


def test_enumeration_max_sizes_match_bound():
    for n, d in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)]:
        cap = min(6, cross_oddtown_bound(n, d) + 1)
        best = max(len(f) for f in enumerate_cross_oddtown(n, d, cap))
        assert best == cross_oddtown_bound(n, d)


def test_fast_chain_check_matches_full_chain():
    for members in itertools.islice(enumerate_cross_oddtown(3, 2, 4), 0, 500, 11):
        fam = TupleFamily(n=3, d=2, members=members)
        full = verify_oddtown_chain(fam)
        fast = fast_chain_check(members, 3, 2)
        assert full["verified"]
        assert fast["semi_diagonal"] and fast["certificate_reconstructs"]
        assert fast["mfrank"] == full["mfrank"]
        assert fast["mfrank_le_n"] and fast["mfrank_lower_ok"]


def test_chain_flags_non_oddtown_family():
    fam = TupleFamily(n=3, d=2, members=((0b001, 0b001), (0b011, 0b010)))
    chain = verify_oddtown_chain(fam)
    assert not chain["is_cross_oddtown"]
    assert not chain["verified"]


def test_mask_validation():
    with pytest.raises(ValueError):
        TupleFamily(n=2, d=2, members=((0b100, 0b001),))
    with pytest.raises(ValueError):
        SetFamily(n=2, members=(4,))
    with pytest.raises(ValueError):
        TupleFamily(n=2, d=1, members=())
