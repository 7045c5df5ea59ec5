"""Reference analysis pipeline: traversal + border engine + classification + scoring."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from . import classes
from .borders import BorderEngine
from .scoring import (
    MAXIMAL_REPEAT,
    MINIMAL_ABSENT,
    MINIMAL_RARE,
    RIGHT_EXTENSION,
    RIGHT_MAXIMAL,
    MarkovModel,
    ScoreRecord,
    Thresholds,
    clamp_variance,
    default_score,
    fstar,
    moments,
)
from .text_index import BwtIndex
from .traversal import NodeEvent, Observer, TraversalError, TraversalStats, traverse

log = logging.getLogger(__name__)


@dataclass
class Counters:
    unscored: int = 0
    negative_variance: int = 0
    pi_underflow: int = 0
    maws: int = 0
    minimal_rare: int = 0
    maximal_repeats: int = 0
    right_maximal: int = 0
    br_pairs: int = 0
    char_pushes: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class AnalysisResult:
    records: list
    stats: TraversalStats
    counters: Counters = field(default_factory=Counters)


class Analyzer(Observer):
    """Classifies each entered node and scores what the thresholds ask for."""

    def __init__(self, borders: BorderEngine, model: MarkovModel, thresholds: Thresholds,
                 score_fn=default_score):
        self.b = borders
        self.N = model.N
        self.P = borders.P
        self.th = thresholds
        self.score_fn = score_fn
        self.records: list[ScoreRecord] = []
        self.counters = Counters()
        self.freq = [0] * (borders.sigma + 1)

    def _fits(self, m: int) -> bool:
        return self.th.max_len is None or m <= self.th.max_len

    def _emit(self, codes, cls, f, p, phi, gamma, bord, chain):
        m = len(codes)
        N = self.N
        c = self.counters
        if m > N or p <= 0.0:
            if p <= 0.0:
                c.pi_underflow += 1
            c.unscored += 1
            if self.th.mode == "all" or (self.th.zmin is None and self.th.zmax is None):
                self.records.append(ScoreRecord(codes, cls, m, f, math.nan, math.nan, math.nan,
                                                0, bord, phi, gamma))
            return
        if 2 * m - 2 > N:
            # shifts beyond the text contribute no pairs: drop those border terms
            K = N - m + 1
            phi_eff = 0.0
            for blen, pi_rest in chain():
                coef = K - (m - blen)
                if coef > 0:
                    phi_eff += coef * pi_rest
        else:
            phi_eff = phi
        E, V = moments(m, p, phi_eff, N)
        Vc = clamp_variance(V)
        if Vc != V:
            if math.isnan(Vc):
                c.negative_variance += 1
                log.warning("negative variance %g for a length-%d word", V, m)
        fs = fstar(m, bord, N)
        z = self.score_fn(f, E, Vc, m, fs)
        if self.th.keep(cls, z):
            self.records.append(ScoreRecord(codes, cls, m, f, E, Vc, z, fs, bord, phi, gamma))

    def enter(self, event: NodeEvent) -> None:
        b = self.b
        M = event.length
        rep = event.repr
        exts = event.extensions
        is_max = classes.is_maximal_repeat(event)
        c = self.counters
        if M > 0:
            c.right_maximal += 1
            c.maximal_repeats += is_max
        mode = self.th.mode
        if M > 0 and self._fits(M) and (mode == "all" or (is_max and self.th.wants_over)):
            codes = b.spell(M)
            cls = MAXIMAL_REPEAT if is_max else RIGHT_MAXIMAL
            self._emit(codes, cls, rep.width, b.ppi[M], b.pphi[M], b.pgamma[M], b.pbord[M],
                       lambda: b.border_chain_node(M))
        if mode == "all" and self._fits(M + 1):
            codes = b.spell(M)
            first = b.pchar[M] if M else None
            for i, ch in enumerate(rep.chars):
                if ch == 0:
                    continue
                wb, F, G = b.read(ch, M)
                beta, _, _ = b.ext_scores(M, wb, first, ch) if M else (0, 0.0, 0.0)
                self._emit(codes + (ch,), RIGHT_EXTENSION, rep.count(i), b.ppi[M] * self.P[ch],
                           F, G, beta, lambda: b.border_chain_ext(M, wb, first, ch))
        if is_max and (self.th.wants_under or mode == "all"):
            self._rare_and_absent(event)

    def _rare_and_absent(self, event: NodeEvent) -> None:
        b = self.b
        M = event.length
        rep = event.repr
        freq = self.freq
        for i, ch in enumerate(rep.chars):
            freq[ch] = rep.count(i)
        want = self.th.wants_under and self._fits(M + 2)
        body = b.spell(M) if want else ()
        pi_w = b.ppi[M]
        for ext in event.extensions:
            a = ext.a
            if a == 0:
                continue
            seed = ext.seed
            rare = classes.minimal_rare_occurring(ext, freq)
            absent = classes.minimal_absent(rep, ext)
            self.counters.minimal_rare += len(rare)
            self.counters.maws += len(absent)
            if not want:
                continue
            L = M + 1
            for ch, f in rare:
                u = b.ext_link(L, seed.bord, ch)
                beta, F, G = b.ext_scores(L, u, a, ch)
                self._emit((a,) + body + (ch,), MINIMAL_RARE, f, self.P[a] * pi_w * self.P[ch], F, G,
                           beta, lambda: b.border_chain_ext(L, u, a, ch))
            for ch in absent:
                u = b.ext_link(L, seed.bord, ch)
                beta, F, G = b.ext_scores(L, u, a, ch)
                self._emit((a,) + body + (ch,), MINIMAL_ABSENT, 0, self.P[a] * pi_w * self.P[ch], F, G,
                           beta, lambda: b.border_chain_ext(L, u, a, ch))
        for ch in rep.chars:
            freq[ch] = 0


def check_bounds(result: AnalysisResult, n: int, sigma: int) -> None:
    """Counting bounds every run must respect; a violation means a traversal bug."""
    st, c = result.stats, result.counters
    if st.nodes > n - 1:
        raise TraversalError(f"{st.nodes} right-maximal nodes for n={n}")
    if c.maws > sigma * n:
        raise TraversalError(f"{c.maws} minimal absent words for sigma={sigma}, n={n}")
    if c.br_pairs > 2 * (st.nodes + st.weiner_links):
        raise TraversalError(f"{c.br_pairs} border pairs for {st.nodes} nodes")


def analyze(index: BwtIndex, model: MarkovModel, thresholds: Thresholds, economy: bool = False,
            score_fn=default_score, sample_every: int = 0, extra_observers=()) -> AnalysisResult:
    if economy and thresholds.mode == "all":
        raise ValueError("storage economy cannot score every node; use over/under/both")
    borders = BorderEngine(model, index.sigma, index.n, economy=economy)
    analyzer = Analyzer(borders, model, thresholds, score_fn)
    # the traversal never needs nodes longer than the longest reportable word
    limit = thresholds.max_len
    stats = traverse(index, [borders, analyzer, *extra_observers], max_len=limit,
                     sample_every=sample_every)
    analyzer.counters.br_pairs = borders.br_pairs
    analyzer.counters.char_pushes = borders.char_pushes
    result = AnalysisResult(analyzer.records, stats, analyzer.counters)
    check_bounds(result, index.n, index.sigma)
    return result
