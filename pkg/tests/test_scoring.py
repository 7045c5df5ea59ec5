import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bwtwords import oracle
from bwtwords.scoring import (
    MAXIMAL_REPEAT,
    MINIMAL_ABSENT,
    ModelError,
    ThresholdError,
    Thresholds,
    clamp_variance,
    default_max_len,
    estimate_model,
    fstar,
    moments,
    node_phi_gamma,
    zscore,
)
from bwtwords.text_index import ingest


def test_aa_uniform_two_letters():
    # borders of "aa": {1}; phi = (5 - 4 + 1 + 1) * 1/2, gamma = 1/2
    phi, gamma = node_phi_gamma(0.5, 0.0, 0.0, 2, 1, 5)
    assert phi == pytest.approx(1.5) and gamma == pytest.approx(0.5)
    E, V = moments(2, 0.25, phi, 5)
    assert E == pytest.approx(1.0, rel=1e-12)
    assert V == pytest.approx(1.125, rel=1e-12)


def test_aa_against_all_texts():
    E, V = oracle.enumerate_moments((1, 1), [0.0, 0.5, 0.5], 5)
    assert (E, V) == pytest.approx((1.0, 1.125), rel=1e-12)
    assert oracle.exact_moments_pairs((1, 1), [0.0, 0.5, 0.5], 5) == pytest.approx((1.0, 1.125))


def test_borderless_and_single_char_variance():
    p, N, m = 0.01, 50, 4
    E, V = moments(m, p, 0.0, N)
    assert V == pytest.approx(E * (1 - p) - p * p * (m - 1) * (2 * N - 3 * m + 2))
    E1, V1 = moments(1, 0.3, 0.0, 10)
    assert V1 == pytest.approx(E1 * 0.7)


def test_ana_phi_from_single_border():
    t = ingest(b"banana")
    P = estimate_model(t).P
    pi_na = P[3] * P[1]
    phi, gamma = node_phi_gamma(pi_na, 0.0, 0.0, 3, 1, 6)
    assert gamma == pytest.approx(pi_na)
    assert phi == pytest.approx(2 * pi_na)
    assert (phi, gamma) == pytest.approx(oracle.definitional_phi_gamma((1, 3, 1), P, 6))


@pytest.mark.parametrize("m,bord,N,expected", [(2, 1, 5, 4), (3, 1, 6, 2), (3, 0, 10, 3), (1, 0, 7, 7)])
def test_fstar(m, bord, N, expected):
    assert fstar(m, bord, N) == expected


def test_zscore_cases():
    assert zscore(3, 3.0, 2.0) == 0.0
    assert zscore(0, 2.0, 4.0) == pytest.approx(-1.0)
    assert zscore(1, 0.0, 0.0) == pytest.approx(1e12)
    assert math.isnan(zscore(1, 0.0, math.nan))


def test_clamp_variance():
    assert clamp_variance(-1e-12) == 0.0
    assert math.isnan(clamp_variance(-1e-3))
    assert clamp_variance(2.0) == 2.0


def test_estimate_model_sources(tmp_path):
    t = ingest(b"banana")
    m = estimate_model(t)
    assert m.N == 6
    assert list(m.P[1:]) == pytest.approx([3 / 6, 1 / 6, 2 / 6])
    assert list(estimate_model(ingest(b"ACGT"), "uniform").P[1:]) == [0.25] * 4
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"a": 0.5, "b": 0.25, "n": 0.25}))
    assert list(estimate_model(t, "file", str(good)).P[1:]) == [0.5, 0.25, 0.25]


@pytest.mark.parametrize("payload", [{"a": 0.4, "b": 0.2, "n": 0.2}, {"a": 0.5, "b": 0.5}, [0.5, 0.5],
                                     {"a": -0.5, "b": 1.0, "n": 0.5}])
def test_estimate_model_rejects_bad_files(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ModelError):
        estimate_model(ingest(b"banana"), "file", str(path))


@pytest.mark.parametrize("kwargs", [dict(mode="over", zmax=1.0), dict(mode="under", zmin=1.0),
                                    dict(mode="all", zmin=0.0), dict(mode="both", zmin=math.nan),
                                    dict(mode="both", max_len=0), dict(mode="sideways")])
def test_threshold_validation(kwargs):
    with pytest.raises(ThresholdError):
        Thresholds(**kwargs)


def test_threshold_keep():
    th = Thresholds("both", zmin=2.0, zmax=-2.0)
    assert th.keep(MAXIMAL_REPEAT, 2.0) and not th.keep(MAXIMAL_REPEAT, 1.9)
    assert th.keep(MINIMAL_ABSENT, -2.5) and not th.keep(MINIMAL_ABSENT, 0.0)
    assert not Thresholds("over", zmin=math.inf).keep(MAXIMAL_REPEAT, 1e300)


def test_default_max_len():
    assert default_max_len(4, 1_000_000) == 10 + 2
    assert default_max_len(2, 1024, slack=0) == 10
    assert default_max_len(1, 100) is None


words = st.lists(st.integers(1, 3), min_size=1, max_size=6)
probs = st.lists(st.floats(0.05, 1.0), min_size=3, max_size=3).map(lambda xs: [0.0] + [x / sum(xs) for x in xs])


@settings(max_examples=200, deadline=None)
@given(words, probs, st.integers(1, 12))
def test_closed_form_matches_pair_sum(w, P, N):
    w = tuple(w)
    m = len(w)
    if m > N:
        return
    # keep only border terms whose shift still fits, as the engines do
    K = N - m + 1
    phi = sum((K - (m - b)) * oracle.pi_of(w[b:], P) for b in oracle.border_set(w) if K - (m - b) > 0)
    E, V = moments(m, oracle.pi_of(w, P), phi, N)
    E_o, V_o = oracle.exact_moments_pairs(w, P, N)
    assert E == pytest.approx(E_o, rel=1e-9)
    assert V == pytest.approx(V_o, rel=1e-9, abs=1e-12)
    assert clamp_variance(V) >= 0.0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=1, max_size=4), st.integers(1, 7))
def test_moments_against_exhaustive_texts(w, N):
    w = tuple(w)
    if len(w) > N:
        return
    P = [0.0, 0.6, 0.4]
    E_o, V_o = oracle.enumerate_moments(w, P, N)
    E, V = oracle.exact_moments(w, P, N)
    assert E == pytest.approx(E_o, rel=1e-9)
    assert V == pytest.approx(V_o, rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(words, probs, st.integers(12, 60))
def test_recursion_matches_definitional_sums(w, P, N):
    # phi/gamma built bottom-up through the chain of longest borders
    w = tuple(w)
    fail = oracle.failure_function(w)

    def rec(k):
        if k == 0:
            return 0.0, 0.0
        b = fail[k - 1]
        pb, gb = rec(b)
        return node_phi_gamma(oracle.pi_of(w[b:k], P), pb, gb, k, b, N)

    phi, gamma = rec(len(w))
    d_phi, d_gamma = oracle.definitional_phi_gamma(w, P, N)
    assert phi == pytest.approx(d_phi, rel=1e-12, abs=1e-300)
    assert gamma == pytest.approx(d_gamma, rel=1e-12, abs=1e-300)
