import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bwtwords import oracle
from bwtwords.engine import analyze
from bwtwords.kernel import analyze_fast
from bwtwords.report import render_report
from bwtwords.scoring import (
    MAXIMAL_REPEAT,
    MINIMAL_ABSENT,
    MINIMAL_RARE,
    RIGHT_EXTENSION,
    Thresholds,
    estimate_model,
)
from bwtwords.text_index import build_index, ingest, text_from_codes

from conftest import prepare


def by_word(records, cls):
    return {r.codes: r for r in records if r.cls == cls}


def test_banana_both(banana):
    text, idx, model = banana
    res = analyze(idx, model, Thresholds("both"))
    a, n = 1, 3
    assert set(by_word(res.records, MAXIMAL_REPEAT)) == {(a,), (a, n, a)}
    assert {w: r.f for w, r in by_word(res.records, MINIMAL_RARE).items()} == {(n, a, n): 1}
    maws = by_word(res.records, MINIMAL_ABSENT)
    assert set(maws) == oracle.naive_classes(text.symbols[:-1].tolist()).minimal_absent
    aa = maws[(a, a)]
    assert aa.bord == 1 and aa.f == 0
    assert aa.z == pytest.approx(-aa.E / math.sqrt(aa.V))
    ana = by_word(res.records, MAXIMAL_REPEAT)[(a, n, a)]
    assert ana.fstar == 2 and ana.bord == 1
    assert ana.E == pytest.approx(4 * 0.5 * (2 / 6) * 0.5)


def test_over_with_infinite_cutoff_is_empty(banana):
    _, idx, model = banana
    assert analyze(idx, model, Thresholds("over", zmin=math.inf)).records == []
    assert len(analyze_fast(idx, model, Thresholds("over", zmin=math.inf)).records) == 0


def test_max_len_limits_reports():
    text, idx, model = prepare([1, 2, 1, 2, 3, 1, 2, 1, 2, 1, 3, 3, 2, 1] * 3)
    for mode in ("over", "under", "both", "all"):
        res = analyze(idx, model, Thresholds(mode, max_len=2))
        assert res.records and max(r.m for r in res.records) <= 2


def test_all_mode_covers_nodes_and_extensions(banana):
    _, idx, model = banana
    res = analyze(idx, model, Thresholds("all"))
    ext = {r.codes for r in res.records if r.cls == RIGHT_EXTENSION}
    a, b, n = 1, 2, 3
    # right extensions of every right-maximal node, terminator excluded
    assert ext == {(a,), (b,), (n,), (a, n), (n, a, n), (a, n, a, n)}


def test_economy_rejects_all_mode(banana):
    _, idx, model = banana
    with pytest.raises(ValueError):
        analyze(idx, model, Thresholds("all"), economy=True)
    with pytest.raises(ValueError):
        analyze_fast(idx, model, Thresholds("all"), economy=True)


def test_pluggable_score(banana):
    _, idx, model = banana
    res = analyze(idx, model, Thresholds("both"), score_fn=lambda f, E, V, m, fs: f - E)
    for r in res.records:
        assert r.z == pytest.approx(r.f - r.E)


def test_long_words_in_short_text_use_clipped_variance():
    # "abababab" occurs in a text barely longer than it: shifts past the end carry no pairs
    codes = [1, 2] * 5
    text, idx, model = prepare(codes, "uniform")
    res = analyze(idx, model, Thresholds("all"))
    P, N = list(model.P), model.N
    for r in res.records:
        E, V = oracle.exact_moments(r.codes, P, N)
        assert r.E == pytest.approx(E, rel=1e-9)
        assert r.V == pytest.approx(V, rel=1e-9, abs=1e-12)
    assert any(2 * r.m - 2 > N for r in res.records)


def test_pi_underflow_is_counted():
    text = text_from_codes([1] * 3000 + [2])
    idx = build_index(text)
    model = estimate_model(text, "uniform")
    res = analyze_fast(idx, model, Thresholds("all"))
    assert res.counters.pi_underflow > 0
    assert res.counters.unscored >= res.counters.pi_underflow


def _key(r):
    return (r.codes, r.cls, r.m, r.f, repr(r.E), repr(r.V), repr(r.z), r.fstar, r.bord)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=200),
       st.sampled_from(["over", "under", "both", "all"]),
       st.sampled_from(["empirical", "uniform"]),
       st.sampled_from([None, 2, 4]),
       st.booleans())
def test_kernel_matches_python_engine(codes, mode, source, max_len, economy):
    economy = economy and mode != "all"
    text, idx, model = prepare(codes, source)
    th = Thresholds(mode, max_len=max_len)
    ref = analyze(idx, model, th, economy=economy, sample_every=3)
    got = analyze_fast(idx, model, th, economy=economy, sample_every=3)
    assert sorted(map(_key, ref.records)) == sorted(map(_key, got.records.to_records()))
    assert ref.counters == got.counters
    for field in ("nodes", "max_frames", "max_stack_bits", "total_stack_bits", "left_extensions",
                  "weiner_links", "samples"):
        assert getattr(ref.stats, field) == getattr(got.stats, field), field
    assert dict(ref.stats.depth_reads) == dict(got.stats.depth_reads)
    assert render_report(ref.records, mode, text) == render_report(got.records, mode, text)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=2, max_size=150),
       st.floats(-3, 3), st.floats(-3, 3))
def test_economy_reports_identical(codes, zmin, zmax):
    text, idx, model = prepare(codes)
    th = Thresholds("both", zmin=zmin, zmax=zmax)
    base = render_report(analyze(idx, model, th).records, "both", text, 17)
    assert render_report(analyze(idx, model, th, economy=True).records, "both", text, 17) == base
    assert render_report(analyze_fast(idx, model, th, economy=True).records, "both", text, 17) == base


def test_fasta_dna_end_to_end():
    text = ingest(b">chr\nACGTACGTTTGACCA\nACGTAAACGT\n")
    idx = build_index(text)
    res = analyze_fast(idx, estimate_model(text), Thresholds("both"))
    assert len(res.records) > 0
    assert res.stats.nodes <= text.n - 1
