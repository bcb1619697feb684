import itertools
from fractions import Fraction

import pytest

from omex import (CodeTable, WeakDesign, as_extractor_view, encode,
                  greedy_weak_design, list_decode, restrict, trevisan_eval,
                  verify_weak_design)
from omex.rng import SplitMix64

DELTA = Fraction(1, 4)

# grid the greedy construction is expected to cover (block, sets, universe)
DESIGN_GRID = [(1, 4, 4), (2, 3, 6), (2, 4, 10), (2, 6, 14), (3, 4, 16),
               (3, 6, 24), (4, 4, 24)]


def brute_decode(code, word):
    """Agreement-count recomputation, independent of list_decode's innards."""
    out = []
    half_plus = Fraction(1, 2) + code.delta
    for u_int in range(2 ** code.n_msg):
        u = format(u_int, f"0{code.n_msg}b")
        cw = encode(code, u)
        agree = sum(a == b for a, b in zip(cw, word))
        if Fraction(agree, code.codeword_length) >= half_plus:
            out.append(u)
    return out


# --- weak designs -----------------------------------------------------------

def test_single_set_design_vacuous():
    d = WeakDesign(4, 2, ((1, 3),))
    assert verify_weak_design(d) is None
    assert verify_weak_design(d, m=1) is None


def test_disjoint_singletons():
    d = WeakDesign(4, 1, ((1,), (2,), (3,), (4,)))
    assert verify_weak_design(d) is None


def test_disjoint_pairs_partial_sums():
    d = WeakDesign(6, 2, ((1, 2), (3, 4), (5, 6)))
    assert verify_weak_design(d) is None


def test_identical_copies_blow_the_bound():
    d = WeakDesign(6, 2, ((1, 2), (1, 2), (1, 2)))
    v = verify_weak_design(d)
    assert v is not None
    assert v.index == 2
    assert v.kind == "intersection_sum"
    assert v.value == 4          # 2^2 > m-1 = 2


def test_size_and_range_violations():
    assert verify_weak_design(WeakDesign(4, 2, ((1, 1),))).kind == "size"
    assert verify_weak_design(WeakDesign(4, 2, ((1, 5),))).kind == "range"


@pytest.mark.parametrize("block,m,d", DESIGN_GRID)
def test_greedy_designs_verify_on_grid(block, m, d):
    design = greedy_weak_design(block, m, d, seed=33)
    assert design.m == m
    assert design.block_size == block
    assert verify_weak_design(design, m) is None


def test_greedy_deterministic():
    assert greedy_weak_design(2, 3, 8, seed=5) == greedy_weak_design(2, 3, 8, seed=5)


def test_greedy_infeasible_universe():
    # only one candidate block exists, so the third set cannot be placed
    with pytest.raises(RuntimeError, match="raise d"):
        greedy_weak_design(2, 5, 2, seed=1, tries_per_set=10, restarts=3)


def test_greedy_argument_validation():
    with pytest.raises(ValueError):
        greedy_weak_design(3, 2, 2, seed=1)
    with pytest.raises(ValueError):
        greedy_weak_design(0, 2, 4, seed=1)


# --- Hadamard encode / decode -----------------------------------------------

def test_encode_examples():
    code = CodeTable(2, DELTA)
    assert encode(code, "00") == "0000"
    assert encode(code, "01") == "0101"
    assert encode(code, "11") == "0110"
    assert encode(code, "10") == "0011"


def test_encode_length_checks():
    code = CodeTable(2, DELTA)
    with pytest.raises(ValueError):
        encode(code, "011")
    with pytest.raises(ValueError):
        encode(code, "0a")


def test_code_table_invariants():
    assert CodeTable(3, DELTA).codeword_length == 8
    with pytest.raises(ValueError):
        CodeTable(2, Fraction(1, 3))   # delta above 1/4
    with pytest.raises(ValueError):
        CodeTable(2, 0)


def test_decode_own_codeword():
    code = CodeTable(2, DELTA)
    for u_int in range(4):
        u = format(u_int, "02b")
        assert u in list_decode(code, encode(code, u))


def test_decode_0101_exactly_01():
    assert list_decode(CodeTable(2, DELTA), "0101") == ["01"]


def test_decode_all_zeros_exactly_00():
    # nonzero codewords have weight exactly half, below the 3/4 agreement bar
    assert list_decode(CodeTable(2, DELTA), "0000") == ["00"]


def test_decode_matches_brute_oracle_exhaustively_nmsg2():
    code = CodeTable(2, DELTA)
    for w in range(16):
        word = format(w, "04b")
        assert list_decode(code, word) == brute_decode(code, word)


def test_decode_matches_brute_oracle_random_nmsg4():
    code = CodeTable(4, Fraction(1, 8))
    rng = SplitMix64(77)
    for _ in range(300):
        word = format(rng.below(2 ** 16), "016b")
        assert list_decode(code, word) == brute_decode(code, word)


def test_distinct_codewords_agree_on_exactly_half():
    for n_msg in (2, 3, 4):
        code = CodeTable(n_msg, DELTA)
        words = [encode(code, format(u, f"0{n_msg}b")) for u in range(2 ** n_msg)]
        for a, b in itertools.combinations(words, 2):
            agree = sum(x == y for x, y in zip(a, b))
            assert agree == code.codeword_length // 2


def test_list_size_never_exceeds_johnson_bound():
    code = CodeTable(2, DELTA)
    bound = 1 / (4 * float(DELTA) ** 2)
    for w in range(16):
        assert len(list_decode(code, format(w, "04b"))) <= bound
    code4 = CodeTable(4, Fraction(1, 8))
    bound4 = 1 / (4 * float(code4.delta) ** 2)
    rng = SplitMix64(78)
    for _ in range(500):
        word = format(rng.below(2 ** 16), "016b")
        assert len(list_decode(code4, word)) <= bound4


# --- restriction and evaluation ---------------------------------------------

def test_restrict_prefix():
    assert restrict("10110", (1, 2, 3)) == "101"


def test_restrict_examples():
    assert restrict("101100", (2, 5)) == "00"
    assert restrict("101100", (1, 6)) == "10"


def test_restrict_out_of_range():
    with pytest.raises(ValueError):
        restrict("101", (0,))
    with pytest.raises(ValueError):
        restrict("101", (4,))


def test_eval_single_set():
    code = CodeTable(2, DELTA)
    design = WeakDesign(2, 2, ((1, 2),))
    assert trevisan_eval(code, design, "01", "01") == "1"


def test_eval_zero_message_all_zero():
    code = CodeTable(2, DELTA)
    design = greedy_weak_design(2, 3, 8, seed=9)
    for y_int in range(2 ** 8):
        y = format(y_int, "08b")
        assert trevisan_eval(code, design, "00", y) == "000"


def test_eval_matches_componentwise_recomputation():
    code = CodeTable(2, DELTA)
    for d in (2, 3, 4):
        sets = list(itertools.combinations(range(1, d + 1), 2))[:3]
        design = WeakDesign(d, 2, tuple(sets))
        for u_int, y_int in itertools.product(range(4), range(2 ** d)):
            u, y = format(u_int, "02b"), format(y_int, f"0{d}b")
            got = trevisan_eval(code, design, u, y)
            cw = encode(code, u)
            expected = "".join(cw[int(restrict(y, s), 2)] for s in design.sets)
            assert got == expected


def test_eval_parameter_mismatches():
    code = CodeTable(2, DELTA)
    design = WeakDesign(4, 3, ((1, 2, 3),))
    with pytest.raises(ValueError, match="block"):
        trevisan_eval(code, design, "01", "0000")
    good = WeakDesign(4, 2, ((1, 2),))
    with pytest.raises(ValueError, match="length"):
        trevisan_eval(code, good, "01", "00000")


# --- graph export ------------------------------------------------------------

def test_exported_view_is_left_regular_with_full_degree():
    code = CodeTable(2, DELTA)
    design = greedy_weak_design(2, 3, 8, seed=13)
    view = as_extractor_view(code, design, K=2, eps=Fraction(1, 2))
    assert view.N == 4
    assert view.D == 2 ** 8
    assert view.M == 8
    for v in range(view.N):
        assert view.graph.degree_of(v) == view.D
    # the export exists to measure empirical deviation; it must plug in
    from omex import deviation
    assert 0 <= deviation(view, (0, 1)) < 1


def test_exported_view_agrees_with_eval():
    code = CodeTable(2, DELTA)
    design = WeakDesign(3, 2, ((1, 2), (2, 3)))
    view = as_extractor_view(code, design, K=2, eps=Fraction(1, 2))
    for u_int in range(4):
        u = format(u_int, "02b")
        for y_int in range(8):
            y = format(y_int, "03b")
            expected = int(trevisan_eval(code, design, u, y), 2)
            assert view.graph.neighbors[u_int][y_int] == expected
