import math

import numpy as np
import pytest

from shiftkms import (
    BetaShift,
    ForbiddenWords,
    FullShift,
    SFT,
    dim_q,
    entropy_bracket,
    omega_l,
    predecessor_set,
    sofic_check,
)

import oracles

PHI = (1 + math.sqrt(5)) / 2
GOLDEN = SFT([[1, 1], [1, 0]])
EVEN_TRUNC = ForbiddenWords(
    2, ((2, 1, 2), (2, 1, 1, 1, 2), (2, 1, 1, 1, 1, 1, 2), (2, 1, 1, 1, 1, 1, 1, 1, 2))
)


def test_predecessor_set_full_shift():
    assert predecessor_set((1, 2), 1, FullShift(2)) == [(), (1,), (2,)]


def test_predecessor_set_golden_by_first_letter():
    assert predecessor_set((1, 2), 1, GOLDEN) == [(), (1,), (2,)]
    assert predecessor_set((2, 1), 1, GOLDEN) == [(), (1,)]


def test_predecessor_set_forbidden_brute():
    spec = ForbiddenWords(2, ((1, 1),))
    got = predecessor_set((1, 2), 2, spec)
    assert got == sorted(oracles.predecessor_set_brute((1, 2), 2, spec), key=lambda m: (len(m), m))
    assert got == [(), (2,), (1, 2), (2, 2)]


def test_predecessor_set_matches_brute_everywhere():
    specs = [
        FullShift(2),
        GOLDEN,
        ForbiddenWords(2, ((2, 1, 2),)),
        BetaShift(PHI, digit_depth=24),
        BetaShift("1.7", digit_depth=24),
    ]
    for spec in specs:
        for w in oracles.enumerate_words(spec, 4):
            for l in (0, 1, 3):
                got = predecessor_set(w, l, spec)
                want = sorted(
                    oracles.predecessor_set_brute(w, l, spec), key=lambda m: (len(m), m)
                )
                assert got == want


def test_predecessor_set_rejects_inadmissible_word():
    with pytest.raises(ValueError):
        predecessor_set((2, 2), 2, GOLDEN)


def test_omega_full_shift_single_class():
    for l in (1, 3, 5):
        part = omega_l(FullShift(3), l, 6)
        assert part.class_count == 1
        assert part.stabilized


def test_omega_golden_two_classes():
    part = omega_l(GOLDEN, 1, 6)
    assert part.class_count == 2
    assert part.stabilized
    # classes are the words starting with 1 and the words starting with 2
    by_first = {c.representative[:1]: c.predecessors for c in part.classes}
    assert by_first[(1,)] == ((), (1,), (2,))
    assert by_first[(2,)] == ((), (1,))
    assert omega_l(GOLDEN, 2, 6).class_count == 2


def test_omega_beta_17_grows_linearly():
    spec = BetaShift("1.7", digit_depth=32)
    part = omega_l(spec, 6, 12)
    assert part.class_count == 7
    assert part.stabilized


def test_omega_matches_brute_partition():
    specs = [
        FullShift(2),
        GOLDEN,
        ForbiddenWords(2, ((2, 1, 2),)),
        BetaShift("1.7", digit_depth=24),
    ]
    for spec in specs:
        for l, depth in ((1, 4), (2, 5), (3, 6)):
            assert omega_l(spec, l, depth).class_count == oracles.past_classes_brute(
                spec, l, depth
            )


def test_partition_refines_and_counts_monotone():
    for spec in (GOLDEN, EVEN_TRUNC, BetaShift("1.7", digit_depth=32)):
        prev = None
        prev_count = 0
        for l in range(1, 6):
            part = omega_l(spec, l, 8)
            assert part.class_count >= prev_count
            prev_count = part.class_count
            if prev is not None:
                coarse = {w: ci for ci, cls in enumerate(prev.classes) for w in cls.words}
                for cls in part.classes:
                    assert len({coarse[w] for w in cls.words}) == 1
            prev = part


def test_sft_class_count_bounded_by_power_of_alphabet():
    rng = np.random.default_rng(37)
    for _ in range(8):
        d = int(rng.integers(2, 5))
        M = oracles.random_irreducible_zero_one(rng, d)
        part = omega_l(SFT(M), 4, 6)
        assert part.class_count <= 2**d


def test_dim_q_examples():
    assert dim_q(FullShift(2), 5, 8).count == 1
    assert dim_q(GOLDEN, 5, 8).count == 2
    assert dim_q(BetaShift(PHI, digit_depth=32), 5, 8).count == 2


def test_dim_q_consistent_with_enumeration():
    specs = [
        FullShift(2),
        GOLDEN,
        ForbiddenWords(2, ((2, 1, 2),)),
        BetaShift("1.7", digit_depth=32),
    ]
    for spec in specs:
        for n in range(1, 7):
            for depth in range(max(n, 2), 10):
                assert dim_q(spec, n, depth).count == omega_l(spec, n, depth).class_count


def test_dim_q_beta_linear_growth_with_aperiodic_expansion():
    spec = BetaShift("1.7", digit_depth=64)
    assert spec.expansion().periodicity is None
    for n in range(1, 11):
        res = dim_q(spec, n, 16)
        assert res.stabilized
        assert res.count == n + 1


def test_sofic_check_golden():
    report = sofic_check(GOLDEN, 8)
    assert report.sofic_detected
    assert set(report.counts) == {2}


def test_sofic_check_even_shift_truncation():
    report = sofic_check(EVEN_TRUNC, 16, depth=20)
    assert report.sofic_detected
    assert report.counts[-1] == 9


def test_sofic_check_beta_17_not_detected():
    report = sofic_check(BetaShift("1.7", digit_depth=64), 8, depth=12)
    assert not report.sofic_detected
    assert report.counts == (2, 3, 4, 5, 6, 7, 8, 9)
    assert all(report.stabilized)


def test_sofic_check_detects_golden_beta_shift():
    report = sofic_check(BetaShift(PHI, digit_depth=32), 8, depth=12)
    assert report.sofic_detected
    assert set(report.counts) == {2}


def test_class_counts_are_presentation_independent():
    # three presentations of the same language give the same cover dimensions
    presentations = (GOLDEN, ForbiddenWords(2, ((2, 2),)), BetaShift(PHI, digit_depth=32))
    for n in range(1, 7):
        counts = {dim_q(spec, n, 10).count for spec in presentations}
        assert counts == {2}


def test_bracket_sofic_inputs_close():
    for spec in (GOLDEN, FullShift(3), EVEN_TRUNC):
        report = entropy_bracket(spec, 20)
        assert report.sofic_detected
        assert report.width == 0.0


def test_bracket_full_shift_is_log_d():
    report = entropy_bracket(FullShift(4), 20)
    assert abs(report.lower - math.log(4)) < 1e-12
    assert abs(report.upper - math.log(4)) < 1e-12


def test_bracket_beta_17_correction():
    spec = BetaShift("1.7", digit_depth=80)
    report = entropy_bracket(spec, 30, depth=40)
    assert not report.sofic_detected
    assert report.dims == tuple(n + 1 for n in range(1, 31))
    expected = 2 * math.log(31) / 30
    assert abs((report.upper - report.lower) - expected) < 1e-12


def test_validation_errors():
    with pytest.raises(ValueError):
        omega_l(GOLDEN, 3, 2)
    with pytest.raises(ValueError):
        dim_q(GOLDEN, -1, 5)
    with pytest.raises(ValueError):
        sofic_check(GOLDEN, 1)
    with pytest.raises(ValueError):
        entropy_bracket(GOLDEN, 3)
    with pytest.raises(ValueError):
        omega_l(ForbiddenWords(1, ((1,),)), 1, 3)
