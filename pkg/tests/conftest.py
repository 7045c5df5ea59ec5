import math
import random

import pytest

from bwtwords.scoring import estimate_model
from bwtwords.text_index import build_index, ingest, text_from_codes


def random_codes(rng: random.Random, n: int, sigma: int) -> list[int]:
    return [rng.randint(1, sigma) for _ in range(n)]


def repetitive_codes(rng: random.Random, n: int, sigma: int) -> list[int]:
    """A short motif tiled over the text with a few point mutations."""
    motif = random_codes(rng, rng.randint(1, 6), sigma)
    out = (motif * (n // len(motif) + 1))[:n]
    for _ in range(rng.randint(0, 3)):
        out[rng.randrange(n)] = rng.randint(1, sigma)
    return out


def make_corpus(count: int, seed: int, n_range=(10, 2000), sigma_range=(1, 8)) -> list[list[int]]:
    """Random texts with log-uniform lengths; unary and tiled texts stay short.

    The brute-force oracle is cubic on highly repetitive input, so those
    texts are capped at 300 symbols.
    """
    rng = random.Random(seed)
    lo, hi = n_range
    out = []
    for i in range(count):
        sigma = rng.randint(*sigma_range)
        n = int(round(math.exp(rng.uniform(math.log(lo), math.log(hi)))))
        if sigma == 1 or i % 5 == 4:
            n = min(n, 300)
            out.append(repetitive_codes(rng, n, sigma))
        else:
            out.append(random_codes(rng, n, sigma))
    return out


def prepare(codes, source="empirical"):
    text = text_from_codes(codes)
    return text, build_index(text), estimate_model(text, source)


@pytest.fixture(scope="session")
def banana():
    text = ingest(b"banana")
    return text, build_index(text, keep_sa=True), estimate_model(text)
