import pytest

from thompson_kex.engine import inverse, multiply
from thompson_kex.subgroups import (
    GenerationStalled,
    S_A,
    S_B,
    S_W,
    SeededRng,
    SubgroupParams,
    gen_A,
    gen_B,
    gen_base_word,
    in_A,
    in_B,
    random_product,
    signed,
)
from thompson_kex.words import NormalWord


def test_splitmix64_reference_vector():
    rng = SeededRng(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_rng_below_and_split():
    rng = SeededRng(42)
    draws = [rng.below(6) for _ in range(6000)]
    assert set(draws) == set(range(6))
    assert min(draws.count(k) for k in range(6)) > 850
    a, b = SeededRng(9).split(1), SeededRng(9).split(2)
    assert a.next_u64() != b.next_u64()
    parent = SeededRng(9)
    before = parent.next_u64()
    parent.split(5)
    assert SeededRng(9).next_u64() == before
    with pytest.raises(ValueError):
        rng.below(0)


def test_params_validation():
    with pytest.raises(ValueError):
        SubgroupParams(1, 16)
    with pytest.raises(ValueError):
        SubgroupParams(3, -2)


def test_in_A_examples():
    assert in_A(NormalWord((0,), (1,)), 2)
    assert in_A(NormalWord(), 5)
    assert not in_A(NormalWord((5,), (5, 6)), 2)  # unequal part lengths
    assert not in_A(NormalWord((5,), (6,)), 2)  # 5 - 1 >= 2
    # i_k - k < s at the boundary: x_0 x_s^-1 is a generator.
    assert in_A(NormalWord((0,), (4,)), 4)
    assert not in_A(NormalWord((0,), (5,)), 4)


def test_in_B_examples():
    assert in_B(NormalWord((3,), ()), 2)
    assert in_B(NormalWord(), 2)
    assert not in_B(NormalWord((0,), ()), 2)
    assert not in_B(NormalWord((4,), (2,)), 2)


def test_generating_sets():
    assert S_A(3) == [NormalWord((0,), (k,)) for k in (1, 2, 3)]
    assert S_B(3) == [NormalWord((k,), ()) for k in (4, 5, 6)]
    assert S_W(2) == [NormalWord((k,), ()) for k in range(5)]
    assert signed(S_A(2))[1] == NormalWord((1,), (0,))
    assert all(in_A(g, 5) for g in signed(S_A(5)))
    assert all(in_B(g, 5) for g in signed(S_B(5)))


def test_gen_A_first_step():
    a = gen_A(SubgroupParams(3, 2), SeededRng(1))
    assert a in signed(S_A(3))


def test_gen_B_first_step():
    b = gen_B(SubgroupParams(3, 1), SeededRng(1))
    assert len(b) == 1 and b in signed(S_B(3))


def test_gen_base_word_first_step():
    w = gen_base_word(SubgroupParams(4, 1), SeededRng(3))
    assert w in signed(S_W(4))


@pytest.mark.parametrize("s", [2, 3, 5, 8])
def test_generated_elements_are_members(s):
    for seed in range(40):
        rng = SeededRng(seed)
        p = SubgroupParams(s, 40)
        a, b = gen_A(p, rng), gen_B(p, rng)
        assert in_A(a, s) and len(a.pos) == len(a.neg) and len(a) >= 40
        assert in_B(b, s) and len(b) >= 40


def test_generation_is_deterministic():
    p = SubgroupParams(4, 64)
    assert gen_A(p, SeededRng(11)) == gen_A(p, SeededRng(11))
    assert gen_B(p, SeededRng(11)) == gen_B(p, SeededRng(11))
    assert gen_base_word(p, SeededRng(11)) == gen_base_word(p, SeededRng(11))
    assert gen_A(p, SeededRng(11)) != gen_A(p, SeededRng(12))


def test_base_word_index_bound():
    s = 3
    for seed in range(30):
        w = gen_base_word(SubgroupParams(s, 50), SeededRng(seed))
        assert max(w.pos + w.neg) <= s + 2 + len(w)


def test_stop_rule_first_length_at_least_M():
    # Replaying the walk: every earlier prefix is strictly shorter than M.
    s, M = 3, 30
    alphabet = signed(S_A(s))
    rng, replay = SeededRng(5), SeededRng(5)
    target = gen_A(SubgroupParams(s, M), rng)
    u = NormalWord()
    while u != target:
        assert len(u) < M
        u = multiply(u, alphabet[replay.below(len(alphabet))])


def test_generation_stalled():
    # Multiplying by the identity never makes progress; the step cap must trip.
    with pytest.raises(GenerationStalled):
        random_product([NormalWord()], 3, SeededRng(0))


@pytest.mark.parametrize("s", range(2, 9))
def test_commutation_and_product_structure(s):
    p = SubgroupParams(s, 24)
    for seed in range(60):
        rng = SeededRng(seed)
        a, b = gen_A(p, rng), gen_B(p, rng)
        ab = multiply(a, b)
        assert ab == multiply(b, a)
        m = len(a.pos)
        assert ab == NormalWord(a.pos + tuple(x + m for x in b.pos), a.neg + tuple(x + m for x in b.neg))


@pytest.mark.parametrize("s", range(2, 9))
def test_closure(s):
    p = SubgroupParams(s, 24)
    for seed in range(60):
        rng = SeededRng(seed)
        u, v = gen_A(p, rng), gen_A(p, rng)
        assert in_A(multiply(u, v), s)
        assert in_A(inverse(u), s)
        assert in_A(multiply(inverse(u), v), s)
        x, y = gen_B(p, rng), gen_B(p, rng)
        assert in_B(multiply(x, y), s) and in_B(inverse(x), s)


def test_key_space_sanity():
    p = SubgroupParams(3, 16)
    distinct = {gen_A(p, SeededRng(seed)) for seed in range(10_000)}
    assert len(distinct) >= 2**8
