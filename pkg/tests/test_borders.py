import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bwtwords import oracle
from bwtwords.borders import BorderEngine
from bwtwords.scoring import estimate_model
from bwtwords.text_index import build_index, ingest, text_from_codes
from bwtwords.traversal import Observer, TraversalError, traverse


class Probe(Observer):
    """Runs after the border engine and checks it against direct computation."""

    def __init__(self, engine, P, N):
        self.b = engine
        self.P = P
        self.N = N
        self.bord = {}
        self.ext_checks = 0
        self.problems = []

    def enter(self, event):
        b = self.b
        M = event.length
        w = b.spell(M)
        self.bord[w] = b.pbord[M]
        if M and b.pbord[M] != oracle.failure_function(w)[-1]:
            self.problems.append(("node", w))
        if abs(b.ppi[M] - oracle.pi_of(w, self.P)) > 1e-12 * max(b.ppi[M], 1e-300):
            self.problems.append(("pi", w))
        if b.pphi[M] is not None:
            phi, gamma = oracle.definitional_phi_gamma(w, self.P, self.N)
            if b.pphi[M] != pytest.approx(phi, rel=1e-12, abs=1e-300) or \
                    b.pgamma[M] != pytest.approx(gamma, rel=1e-12, abs=1e-300):
                self.problems.append(("phi", w))
        if M == 0 or b.economy:
            # economy keeps char-stack entries only where the analyzer reads them
            return
        # every right extension Wb: link, border, phi/gamma
        for ch in event.repr.chars:
            if ch == 0:
                continue
            wb, F, G = b.read(ch, M)
            beta, phi, gamma = b.ext_scores(M, wb, b.pchar[M], ch)
            s = w + (ch,)
            self.ext_checks += 1
            if beta != oracle.failure_function(s)[-1]:
                self.problems.append(("ext", s))
            d_phi, d_gamma = oracle.definitional_phi_gamma(s, self.P, self.N)
            if (F, G) != pytest.approx((d_phi, d_gamma), rel=1e-12, abs=1e-300):
                self.problems.append(("F", s))
        # every absent or rare aWb hanging off this node
        for ext in event.extensions:
            a = ext.a
            if a == 0:
                continue
            child_bord = ext.seed.bord
            if child_bord != oracle.failure_function((a,) + w)[-1]:
                self.problems.append(("child", (a,) + w))
            for ch in event.repr.chars:
                if ch == 0:
                    continue
                u = b.ext_link(M + 1, child_bord, ch)
                beta, _, _ = b.ext_scores(M + 1, u, a, ch)
                s = (a,) + w + (ch,)
                if beta != oracle.failure_function(s)[-1]:
                    self.problems.append(("maw", s))


def run_probe(text, economy=False):
    idx = build_index(text)
    model = estimate_model(text)
    engine = BorderEngine(model, text.sigma, idx.n, economy=economy)
    probe = Probe(engine, list(model.P), model.N)
    traverse(idx, [engine, probe])
    return engine, probe


def test_banana_path_borders():
    _, probe = run_probe(ingest(b"banana"))
    a, n = 1, 3
    assert probe.bord[(a,)] == 0
    assert probe.bord[(n, a)] == 0
    assert probe.bord[(a, n, a)] == 1
    assert not probe.problems


def test_anan_border_through_link():
    engine = None

    class AtAna(Observer):
        def enter(self, event):
            if engine.spell(event.length) == (1, 3, 1):
                u = engine.ext_link(3, engine.pbord[3], 3)
                self.seen = (u, engine.ext_scores(3, u, engine.pchar[3], 3)[0])

    text = ingest(b"banana")
    idx = build_index(text)
    engine = BorderEngine(estimate_model(text), text.sigma, idx.n)
    probe = AtAna()
    traverse(idx, [engine, probe])
    assert probe.seen == (1, 2)


def test_maw_aa_border_is_one():
    text = ingest(b"banana")
    idx = build_index(text)
    engine = BorderEngine(estimate_model(text), text.sigma, idx.n)
    got = {}

    class Root(Observer):
        def enter(self, event):
            if event.length == 0:
                ext = next(e for e in event.extensions if e.a == 1)
                u = engine.ext_link(1, ext.seed.bord, 1)
                got["aa"] = engine.ext_scores(1, u, 1, 1)[0]

    traverse(idx, [engine, Root()])
    assert got["aa"] == 1


def test_stacks_empty_after_traversal():
    engine, _ = run_probe(ingest(b"mississippi"))
    assert engine.depth == -1
    assert all(len(s) == 0 for s in engine.stacks)
    assert engine.stack_bits == 0


def test_exit_out_of_order_is_rejected():
    text = ingest(b"banana")
    engine = BorderEngine(estimate_model(text), text.sigma, text.n)
    with pytest.raises(TraversalError):
        engine.exit(0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=150))
def test_every_border_and_score_matches_oracle(codes):
    _, probe = run_probe(text_from_codes(codes))
    assert not probe.problems, probe.problems[:5]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=1, max_size=200))
def test_economy_borders_match_oracle(codes):
    # scores are skipped off maximal repeats, borders never are
    _, probe = run_probe(text_from_codes(codes), economy=True)
    assert not probe.problems, probe.problems[:5]
