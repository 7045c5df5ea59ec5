"""Cross-check an analysis against the brute-force oracles (small inputs only)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import oracle
from .engine import analyze
from .scoring import (
    MAXIMAL_REPEAT,
    MINIMAL_ABSENT,
    MINIMAL_RARE,
    RIGHT_MAXIMAL,
    MarkovModel,
    Thresholds,
)
from .text_index import BwtIndex, Text

PHI_RTOL = 1e-12
MOMENT_RTOL = 1e-9


@dataclass
class VerifyReport:
    checked_strings: int = 0
    checked_borders: int = 0
    checked_moments: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _close(a: float, b: float, rtol: float, scale: float = 0.0) -> bool:
    # scale absorbs cancellation when the exact value is (near) zero
    return math.isclose(a, b, rel_tol=rtol, abs_tol=rtol * scale + 1e-300)


def _diff(label, ours, theirs, out, limit=20):
    for w in sorted(ours ^ theirs)[:limit]:
        side = "extra" if w in ours else "missing"
        out.append(f"{label}: {side} {w}")


def verify_text(text: Text, index: BwtIndex, model: MarkovModel, economy_check: bool = True) -> VerifyReport:
    """Class sets, borders, phi/gamma and moments of every reported string against the oracles."""
    rep = VerifyReport()
    codes = [int(c) for c in text.symbols[:-1]]
    tab = oracle.naive_classes(codes)
    P = [float(p) for p in model.P]
    N = model.N
    both = analyze(index, model, Thresholds("both"))
    every = analyze(index, model, Thresholds("all"))

    maxrep = {r.codes for r in both.records if r.cls == MAXIMAL_REPEAT}
    rare = {(r.codes, r.f) for r in both.records if r.cls == MINIMAL_RARE}
    maws = {r.codes for r in both.records if r.cls == MINIMAL_ABSENT}
    rmax = {r.codes for r in every.records if r.cls in (MAXIMAL_REPEAT, RIGHT_MAXIMAL)}
    _diff("maximal repeats", maxrep, tab.maximal_repeats - {()}, rep.mismatches)
    _diff("minimal rare", rare, set(tab.minimal_rare.items()), rep.mismatches)
    _diff("minimal absent", maws, tab.minimal_absent, rep.mismatches)
    _diff("right-maximal", rmax, tab.right_maximal - {()}, rep.mismatches)
    rep.checked_strings = len(maxrep) + len(rare) + len(maws) + len(rmax)

    for r in both.records + every.records:
        bord = oracle.failure_function(r.codes)[-1]
        rep.checked_borders += 1
        if bord != r.bord:
            rep.mismatches.append(f"border of {r.codes}: {r.bord} != {bord}")
        if r.phi is not None:
            phi, gamma = oracle.definitional_phi_gamma(r.codes, P, N)
            if not (_close(r.phi, phi, PHI_RTOL) and _close(r.gamma, gamma, PHI_RTOL)):
                rep.mismatches.append(f"phi/gamma of {r.codes}: {(r.phi, r.gamma)} != {(phi, gamma)}")
        if r.scored and r.m <= oracle.MAX_MOMENT_LEN:
            E, V = oracle.exact_moments(r.codes, P, N)
            rep.checked_moments += 1
            if not (_close(r.E, E, MOMENT_RTOL) and _close(r.V, V, MOMENT_RTOL, scale=E)):
                rep.mismatches.append(f"moments of {r.codes}: {(r.E, r.V)} != {(E, V)}")

    if economy_check:
        eco = analyze(index, model, Thresholds("both"), economy=True)
        key = lambda r: (r.codes, r.cls, r.f, repr(r.E), repr(r.V), repr(r.z), r.fstar)  # noqa: E731
        if sorted(map(key, eco.records)) != sorted(map(key, both.records)):
            rep.mismatches.append("storage economy changed the records")
    return rep
