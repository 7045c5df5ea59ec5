"""Occurrence-count statistics under an IID (order-zero) character source.

The scalar helpers at the top are written so numba can compile the very same
source for the fused kernel; keep them free of Python-only constructs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .text_index import Text

SQRT_FLOOR = 1e-12
NEG_VARIANCE_TOL = 1e-9


class ModelError(ValueError):
    pass


class ThresholdError(ValueError):
    pass


def node_phi_gamma(delta, phi_b, gamma_b, m, beta, N):
    """phi and gamma of a length-``m`` string from its longest border (length ``beta``).

    ``delta`` is the probability of the suffix of length ``m - beta``;
    ``phi_b``/``gamma_b`` belong to the border itself.
    """
    if beta == 0:
        return 0.0, 0.0
    phi = delta * (phi_b - 2.0 * (m - beta) * gamma_b + float(N - 2 * m + beta + 1))
    gamma = delta * (1.0 + gamma_b)
    return phi, gamma


def pair_term(m, N):
    """Sum of 2*(K - d) over the shifts 0 < d < m that fit, K = N - m + 1."""
    K = N - m + 1
    if m - 1 <= K:
        return float((m - 1) * (2 * N - 3 * m + 2))
    return float(K * (K - 1))


def moments(m, p, phi, N):
    """Expectation and variance of the occurrence count of a length-``m`` word.

    ``phi`` must only carry border terms whose pair count is positive; that is
    automatic for ``2m - 2 <= N`` and the engines clip it otherwise.
    """
    E = (N - m + 1) * p
    V = E * (1.0 - p) + 2.0 * p * phi - p * p * pair_term(m, N)
    return E, V


def fstar(m, bord, N):
    """Largest number of occurrences a word with this period can have."""
    return -(-(N - m + 1) // (m - bord))


def zscore(f, E, V):
    if V != V:
        return math.nan
    sd = math.sqrt(V) if V > 0.0 else 0.0
    if sd < SQRT_FLOOR:
        sd = SQRT_FLOOR
    return (f - E) / sd


def clamp_variance(V):
    """Round tiny negative variances to zero; flag real negatives with NaN."""
    if V < 0.0:
        if V < -NEG_VARIANCE_TOL:
            return math.nan
        return 0.0
    return V


ScoreFn = Callable[[float, float, float, int, int], float]


def default_score(f, E, V, m, fs):
    return zscore(f, E, V)


@dataclass
class MarkovModel:
    P: np.ndarray  # index 0 (terminator) unused
    N: int
    source: str = "empirical"

    @property
    def sigma(self) -> int:
        return len(self.P) - 1

    def pi(self, codes) -> float:
        out = 1.0
        for c in codes:
            out *= self.P[c]
        return out


def estimate_model(text: Text, source: str = "empirical", path: str | None = None) -> MarkovModel:
    """``empirical`` counts, ``uniform`` 1/sigma, or ``file``: JSON ``{"char": prob}``."""
    N = text.n - 1
    sigma = text.sigma
    P = np.zeros(sigma + 1)
    if source == "empirical":
        counts = np.bincount(text.symbols[:-1], minlength=sigma + 1)
        P[1:] = counts[1:] / N
    elif source == "uniform":
        P[1:] = 1.0 / sigma
    elif source == "file":
        if path is None:
            raise ModelError("file model needs a path")
        with open(path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ModelError("model file must hold a JSON object")
        lookup = {chr(b): i + 1 for i, b in enumerate(text.char_map)}
        total = 0.0
        for key, value in raw.items():
            value = float(value)
            if value < 0 or not math.isfinite(value):
                raise ModelError(f"bad probability {value!r} for {key!r}")
            total += value
            if key in lookup:
                P[lookup[key]] = value
        if abs(total - 1.0) > 1e-12 * max(1, len(raw)) and abs(total - 1.0) > 1e-9:
            raise ModelError(f"probabilities sum to {total}, not 1")
        missing = [chr(text.char_map[c - 1]) for c in range(1, sigma + 1) if P[c] <= 0.0]
        if missing:
            raise ModelError(f"model gives zero probability to present characters {missing}")
    else:
        raise ModelError(f"unknown model source {source!r}")
    return MarkovModel(P=P, N=N, source=source)


# record classes, shared with the kernel as small integers
MAXIMAL_REPEAT, MINIMAL_RARE, MINIMAL_ABSENT, RIGHT_MAXIMAL, RIGHT_EXTENSION = range(5)
CLASS_NAMES = ("maximalRepeat", "minimalRare", "minimalAbsent", "rightMaximal", "rightExtension")
OVER_CLASSES = frozenset({MAXIMAL_REPEAT})
UNDER_CLASSES = frozenset({MINIMAL_RARE, MINIMAL_ABSENT})
MODES = ("over", "under", "both", "all")


@dataclass
class ScoreRecord:
    codes: tuple
    cls: int
    m: int
    f: int
    E: float
    V: float
    z: float
    fstar: int
    bord: int
    phi: float = 0.0
    gamma: float = 0.0

    @property
    def scored(self) -> bool:
        return not math.isnan(self.z)


@dataclass
class Thresholds:
    mode: str = "both"
    zmin: float | None = None
    zmax: float | None = None
    max_len: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ThresholdError(f"unknown mode {self.mode!r}")
        for v in (self.zmin, self.zmax):
            if v is not None and math.isnan(v):
                raise ThresholdError("NaN threshold")
        if self.mode == "over" and self.zmax is not None:
            raise ThresholdError("--z-max has no meaning in over mode")
        if self.mode == "under" and self.zmin is not None:
            raise ThresholdError("--z-min has no meaning in under mode")
        if self.mode == "all" and (self.zmin is not None or self.zmax is not None):
            raise ThresholdError("all mode reports every candidate; drop the thresholds")
        if self.max_len is not None and self.max_len < 1:
            raise ThresholdError("max length must be positive")

    @property
    def wants_over(self) -> bool:
        return self.mode in ("over", "both")

    @property
    def wants_under(self) -> bool:
        return self.mode in ("under", "both")

    def keep(self, cls: int, z: float) -> bool:
        if self.mode == "all":
            return True
        if cls == MAXIMAL_REPEAT:
            return self.zmin is None or z >= self.zmin
        return self.zmax is None or z <= self.zmax


def default_max_len(sigma: int, N: int, slack: int = 2) -> int | None:
    """Length cutoff ceil(log_sigma N) + slack; no cutoff for unary text."""
    if sigma < 2:
        return None
    return math.ceil(math.log(N) / math.log(sigma) - 1e-12) + slack
