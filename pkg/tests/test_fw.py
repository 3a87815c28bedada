"""Configuration verifiers, tensors, bounds, and the bad-box sampler."""

import itertools
import math

import pytest

from flatrank.fw import (
    Configuration,
    IntersectionPolynomial,
    badbox_clique_order,
    badbox_target_size,
    complete_graph_config,
    config_degree,
    config_max_degree,
    eval_h,
    find_config_witness,
    fw_flattening_bound,
    fw_size_bound,
    fw_tensor,
    grow_config_satisfying_family,
    is_config_satisfying,
    max_odd_pairwise_odd_family,
    odd_subsets,
    sample_badbox_family,
    verify_badbox_free,
)
from flatrank.rng import Rng
from flatrank.setfam import SetFamily
from flatrank.tensor import flattening_rank, is_semi_diagonal


FW_CFG = Configuration(k=2, p=2, C=(0b11,), L=(0,))


def test_config_degree_examples():
    assert config_degree(FW_CFG, 0) == 1
    k4 = complete_graph_config(4)
    assert all(config_degree(k4, a) == 3 for a in range(4))
    kwise = Configuration(k=3, p=2, C=((1 << 3) - 1,), L=(0,))
    assert config_max_degree(kwise) == 1
    with pytest.raises(IndexError):
        config_degree(FW_CFG, 2)


def test_configuration_validation():
    with pytest.raises(ValueError):
        Configuration(k=2, p=4, C=(0b11,), L=(0,))
    with pytest.raises(ValueError):
        Configuration(k=2, p=2, C=(0,), L=(0,))
    with pytest.raises(ValueError):
        Configuration(k=2, p=2, C=(0b100,), L=(0,))
    with pytest.raises(ValueError):
        Configuration(k=2, p=2, C=(0b11,), L=(0, 0))


def test_eval_h_examples():
    h01 = IntersectionPolynomial(p=2, L=(0,))
    assert eval_h(h01, 1) == 1 and eval_h(h01, 0) == 0
    h = IntersectionPolynomial(p=5, L=(1, 2))
    assert eval_h(h, 3) == 2
    for root in h.L:
        assert eval_h(h, root) == 0
    assert h.degree == 2


def test_is_config_satisfying_singletons():
    fam = SetFamily(n=4, members=tuple(1 << i for i in range(4)))
    assert is_config_satisfying(fam, FW_CFG)


def test_size_condition_violation():
    cfg = Configuration(k=2, p=2, C=(0b11,), L=(1,))
    fam = SetFamily(n=2, members=(0b01, 0b10))  # singleton sizes lie in L
    assert not is_config_satisfying(fam, cfg)


def test_empty_family_is_satisfying():
    assert is_config_satisfying(SetFamily(n=3, members=()), FW_CFG)


def test_witness_found_for_violating_family():
    # a concrete violating pair for the single-pair configuration:
    # sizes odd (not in L={0}) and intersection odd (not in L) -> witness
    fam = SetFamily(n=3, members=(0b011, 0b001))  # |A|=2 is even -> size cond fails
    assert not is_config_satisfying(fam, FW_CFG)
    fam2 = SetFamily(n=3, members=(0b111, 0b001))  # sizes 3, 1; |meet| = 1 odd
    w = find_config_witness(fam2, FW_CFG)
    assert w is not None and len(w) == 2
    assert not is_config_satisfying(fam2, FW_CFG)


def test_witness_distinct_semantics():
    fam = SetFamily(n=3, members=(0b111, 0b111))  # same set twice
    # as sets there is only one member, so no witness of 2 distinct sets
    assert find_config_witness(fam, FW_CFG, distinct="sets") is None
    # as positions the pair intersects itself oddly
    assert find_config_witness(fam, FW_CFG, distinct="positions") is not None


def test_witness_search_is_ordered_for_asymmetric_c():
    # C = {{0,1}} of order 3 only constrains the first two slots, so the
    # witness may need a non-sorted assignment
    cfg = Configuration(k=3, p=2, C=(0b011,), L=(0,))
    assert not cfg.is_slot_symmetric()
    x, y, z = 0b0111, 0b1001, 0b0100  # |x&y| = 1 odd, |x&z| = 1 odd, |y&z| = 0
    fam = SetFamily(n=4, members=(y, z, x))
    # sorted positions (0,1,2) put y,z in the constrained slots: |y&z| = 0 in L
    assert (y & z).bit_count() == 0
    w = find_config_witness(fam, cfg)
    assert w is not None
    a, b = fam.members[w[0]], fam.members[w[1]]
    assert (a & b).bit_count() % 2 == 1


def test_symmetric_c_detected():
    assert FW_CFG.is_slot_symmetric()
    assert complete_graph_config(3).is_slot_symmetric()
    assert Configuration(k=3, p=2, C=(0b111,), L=(0,)).is_slot_symmetric()
    assert not Configuration(k=2, p=2, C=(0b01,), L=(0,)).is_slot_symmetric()


def test_fw_tensor_diagonal_and_identity():
    fam = SetFamily(n=4, members=tuple(1 << i for i in range(4)))
    t = fw_tensor(fam, FW_CFG)
    assert t.entries == tuple(1 if i == j else 0 for i in range(4) for j in range(4))
    assert is_semi_diagonal(t)


def test_fw_tensor_matches_naive_oracle():
    rng = Rng(123)
    for _ in range(10):
        n = 3 + rng.next_below(3)
        k = 2 + rng.next_below(2)
        p = (2, 3)[rng.next_below(2)]
        c_masks = []
        full = (1 << k) - 1
        for _ in range(1 + rng.next_below(3)):
            x = 1 + rng.next_below(full)
            if x not in c_masks:
                c_masks.append(x)
        lsize = 1 + rng.next_below(min(2, p - 1))
        cfg = Configuration(k=k, p=p, C=tuple(c_masks), L=tuple(range(lsize)))
        m = 1 + rng.next_below(4)
        fam = SetFamily(n=n, members=tuple(rng.next_below(1 << n) for _ in range(m)))
        t = fw_tensor(fam, cfg)
        poly = IntersectionPolynomial(p=p, L=cfg.L)
        for idx in itertools.product(range(m), repeat=k):
            expected = 1
            for x in cfg.C:
                acc = (1 << n) - 1
                for slot in cfg.slots_of(x):
                    acc &= fam.members[idx[slot]]
                expected = (expected * eval_h(poly, acc.bit_count() % p)) % p
            assert t.get(idx) == expected


def test_fw_bound_formulas():
    assert fw_flattening_bound(FW_CFG, 4, 0) == 5
    k3 = complete_graph_config(3)
    assert fw_flattening_bound(k3, 5, 0) == 16
    assert fw_size_bound(FW_CFG, 4) == 5
    kwise3 = Configuration(k=3, p=2, C=(0b111,), L=(0,))
    assert fw_size_bound(kwise3, 4) == 10
    assert fw_size_bound(k3, 5) == 32


def test_flattening_bound_holds_dynamically():
    rng = Rng(77)
    cfg = complete_graph_config(3, p=2, L=(0,))
    fam = grow_config_satisfying_family(cfg, 5, rng, candidate_budget=80)
    assert is_config_satisfying(fam, cfg)
    if fam.members:
        t = fw_tensor(fam, cfg)
        for j in range(cfg.k):
            assert flattening_rank(t, j) <= fw_flattening_bound(cfg, fam.n, j)
        assert len(fam.members) <= fw_size_bound(cfg, fam.n)


def test_odd_subsets_count():
    for t in range(2, 7):
        assert len(odd_subsets(t)) == 1 << (t - 1)
    assert odd_subsets(3) == [0b001, 0b010, 0b100, 0b111]


@pytest.mark.parametrize("t", [2, 3, 4, 5])
def test_odd_pairwise_odd_bound(t):
    assert max_odd_pairwise_odd_family(t) <= 2 ** ((t - 1) / 2)


def test_badbox_target_size():
    assert badbox_target_size(3, 1) == 2  # ceil(2^0.5)
    assert badbox_target_size(3, 2) == 2
    assert badbox_target_size(5, 2) == 4
    assert badbox_target_size(5, 4) == 16


def test_badbox_clique_order():
    assert badbox_clique_order(3) == 8
    assert badbox_clique_order(5) == 16
    assert badbox_clique_order(2) == 8


def test_verify_badbox_free_small():
    members = ((0b001,), (0b010,))
    assert verify_badbox_free(members, 3)  # fewer than k members
    assert not verify_badbox_free([(0b111,)] * 4, 4)  # k copies pairwise odd


def test_verify_badbox_free_matches_bruteforce():
    rng = Rng(2)
    pool = odd_subsets(3)
    for _ in range(40):
        m = 3 + rng.next_below(4)
        members = [
            (pool[rng.next_below(4)], pool[rng.next_below(4)]) for _ in range(m)
        ]
        k = 2 + rng.next_below(3)
        brute = False
        for combo in itertools.combinations(range(m), k):
            if all(
                all(
                    (members[a][j] & members[b][j]).bit_count() % 2 == 1
                    for j in range(2)
                )
                for a, b in itertools.combinations(combo, 2)
            ):
                brute = True
                break
        assert verify_badbox_free(members, k) == (not brute)


def test_sampler_small_case():
    fam = sample_badbox_family(3, 1, seed=1)
    assert len(fam.members_factors) == 2
    assert fam.attempts >= 1
    flat = fam.flat_family()
    assert flat.n == 3
    assert all(mask.bit_count() % 2 == 1 for mask in flat.members)


@pytest.mark.parametrize("t,s", [(3, 1), (3, 2), (5, 2)])
def test_sampler_output_verifies(t, s):
    fam = sample_badbox_family(t, s, seed=11)
    assert verify_badbox_free(fam.members_factors, fam.k)
    cfg = complete_graph_config(fam.k)
    assert is_config_satisfying(fam.flat_family(), cfg, distinct="positions")
    # members really are product sets: size = product of factor sizes, odd
    for factors, mask in zip(fam.members_factors, fam.flat_masks()):
        assert mask.bit_count() == math.prod(f.bit_count() for f in factors)
        assert mask.bit_count() % 2 == 1


def test_sampler_rejects_large_ground_set():
    with pytest.raises(ValueError):
        sample_badbox_family(3, 4, seed=0)


def test_sampler_determinism():
    a = sample_badbox_family(5, 2, seed=42)
    b = sample_badbox_family(5, 2, seed=42)
    assert a == b


def test_grow_family_respects_bound_and_satisfaction():
    rng = Rng(17)
    for _ in range(10):
        cfg = Configuration(k=2, p=3, C=(0b11,), L=(0, 1))
        fam = grow_config_satisfying_family(cfg, 5, rng, candidate_budget=60)
        assert is_config_satisfying(fam, cfg)
        assert len(fam.members) <= fw_size_bound(cfg, 5)
