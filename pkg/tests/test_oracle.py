import pytest

from bwtwords import oracle


def test_banana_classes():
    a, b, n = 1, 2, 3
    tab = oracle.naive_classes([b, a, n, a, n, a])
    assert tab.maximal_repeats - {()} == {(a,), (a, n, a)}
    assert tab.right_maximal == {(), (a,), (n, a), (a, n, a)}
    assert tab.minimal_rare == {(n, a, n): 1}
    assert {(a, a), (b, b), (n, n), (a, b), (b, n), (n, b)} <= tab.minimal_absent
    for w in tab.minimal_absent:
        assert tab.count(w) == 0 and tab.count(w[:-1]) > 0 and tab.count(w[1:]) > 0


def test_unary_right_maximal():
    assert oracle.naive_classes([1, 1, 1, 1]).right_maximal == {(), (1,), (1, 1), (1, 1, 1)}


def test_all_distinct_has_no_repeats():
    tab = oracle.naive_classes([1, 2, 3, 4, 5])
    assert tab.maximal_repeats == {()}
    assert tab.right_maximal == {()}


def test_cap_enforced():
    with pytest.raises(oracle.OracleLimit):
        oracle.naive_classes([1] * 10, cap=5)
    with pytest.raises(oracle.OracleLimit):
        oracle.exact_moments((1,) * 501, [0.0, 1.0], 1000)


@pytest.mark.parametrize("w,expected", [("ana", [0, 0, 1]), ("aaaa", [0, 1, 2, 3]), ("ab", [0, 0]),
                                        ("abacaba", [0, 0, 1, 0, 1, 2, 3])])
def test_failure_function(w, expected):
    assert oracle.failure_function(w) == expected


def test_border_set_follows_failure_chain():
    w = "abacaba"
    fail = oracle.failure_function(w)
    chain, b = [], fail[-1]
    while b:
        chain.append(b)
        b = fail[b - 1]
    assert oracle.border_set(w) == chain == [3, 1]


def test_exact_moments_examples():
    assert oracle.exact_moments((1, 1), [0.0, 0.5, 0.5], 5) == pytest.approx((1.0, 1.125))
    E, V = oracle.exact_moments((2,), [0.0, 0.3, 0.7], 10)
    assert (E, V) == pytest.approx((7.0, 10 * 0.7 * 0.3))


def test_grouped_and_literal_pair_sums_agree():
    P = [0.0, 0.2, 0.5, 0.3]
    for w in [(1, 2, 1), (1, 1, 1, 1), (3, 2), (1, 2, 1, 2, 1)]:
        for N in range(len(w), 12):
            assert oracle.exact_moments(w, P, N) == pytest.approx(oracle.exact_moments_pairs(w, P, N), abs=1e-12)
