"""Text ingestion, BWT construction and the rank / rangeDistinct backend.

Positions exposed through :meth:`BwtIndex.rank`, :meth:`BwtIndex.range_distinct`
and :meth:`BwtIndex.backward_search` are 1-based and inclusive.  Internally the
traversal works on 0-based half-open boundaries.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

TERMINATOR = 0
MAX_SIGMA = 255


class InputError(ValueError):
    """Raised for unusable text input."""


@dataclass(frozen=True)
class Text:
    symbols: np.ndarray  # uint8 codes, terminator last
    sigma: int
    char_map: tuple[int, ...]  # char_map[code - 1] is the original byte

    @property
    def n(self) -> int:
        return len(self.symbols)

    def render(self, codes) -> str:
        return bytes(self.char_map[c - 1] for c in codes).decode("latin-1")

    def encode(self, pattern: bytes | str) -> list[int] | None:
        """Map a literal pattern to codes, or ``None`` if a byte is foreign."""
        if isinstance(pattern, str):
            pattern = pattern.encode("latin-1")
        lookup = {b: i + 1 for i, b in enumerate(self.char_map)}
        out = []
        for b in pattern:
            if b not in lookup:
                return None
            out.append(lookup[b])
        return out


def _strip_fasta(data: bytes) -> bytes:
    lines = data.splitlines()
    headers = [i for i, ln in enumerate(lines) if ln.startswith(b">")]
    if len(headers) > 1:
        raise InputError("FASTA input holds more than one record")
    if headers and headers[0] != 0 and any(ln.strip() for ln in lines[: headers[0]]):
        raise InputError("sequence data before the FASTA header")
    body = lines[headers[0] + 1:] if headers else lines
    return b"".join(ln.strip() for ln in body)


def ingest(data: bytes, fmt: str = "auto") -> Text:
    """Turn raw input bytes into a terminated code sequence.

    ``fmt`` is ``"plain"`` (trailing newline stripped), ``"fasta"`` (single
    record, header and whitespace dropped) or ``"auto"`` (FASTA when the data
    starts with ``>``).
    """
    if fmt == "auto":
        fmt = "fasta" if data.lstrip().startswith(b">") else "plain"
    if fmt == "fasta":
        seq = _strip_fasta(data)
    elif fmt == "plain":
        seq = data.rstrip(b"\r\n")
    else:
        raise InputError(f"unknown input format {fmt!r}")
    if not seq:
        raise InputError("empty input")

    raw = np.frombuffer(seq, dtype=np.uint8)
    present = np.flatnonzero(np.bincount(raw, minlength=256))
    if len(present) > MAX_SIGMA:
        raise InputError(f"{len(present)} distinct bytes; at most {MAX_SIGMA} supported")
    table = np.zeros(256, dtype=np.uint8)
    table[present] = np.arange(1, len(present) + 1, dtype=np.uint8)
    symbols = np.empty(len(raw) + 1, dtype=np.uint8)
    symbols[:-1] = table[raw]
    symbols[-1] = TERMINATOR
    return Text(symbols=symbols, sigma=len(present), char_map=tuple(int(b) for b in present))


def text_from_codes(codes, sigma: int | None = None) -> Text:
    """Build a :class:`Text` straight from codes in ``1..sigma`` (tests, generators)."""
    codes = np.asarray(codes, dtype=np.int64)
    if len(codes) == 0 or codes.min() < 1:
        raise InputError("codes must be nonempty and >= 1")
    sigma = int(codes.max()) if sigma is None else sigma
    if sigma > MAX_SIGMA or codes.max() > sigma:
        raise InputError("code outside alphabet")
    symbols = np.append(codes, 0).astype(np.uint8)
    # printable rendering: a, b, c, ... then the rest of latin-1
    alphabet = [ord("a") + i for i in range(min(sigma, 26))] + list(range(128, 128 + max(0, sigma - 26)))
    return Text(symbols=symbols, sigma=sigma, char_map=tuple(alphabet))


def suffix_array(symbols: np.ndarray) -> np.ndarray:
    """Prefix-doubling suffix sort; relies on a unique smallest terminator."""
    n = len(symbols)
    rank = symbols.astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        second = np.zeros(n, dtype=np.int64)
        second[: n - k] = rank[k:] + 1
        key = rank * (int(rank.max()) + 2) + second
        sa = np.argsort(key, kind="stable")
        skey = key[sa]
        fresh = np.empty(n, dtype=np.int64)
        fresh[sa] = np.concatenate(([0], np.cumsum(skey[1:] != skey[:-1])))
        rank = fresh
        if rank[sa[-1]] == n - 1:
            return sa
        k *= 2
        if k >= n:
            return sa


@dataclass
class BwtIndex:
    """BWT of a terminated text with a level-wise wavelet tree over it.

    Level ``L`` holds the BWT stably sorted by the top ``L`` bits of each code;
    ``ones[L]`` is the cumulative count of set bits (bit ``depth-1-L``) on that
    level.  A tree node with code prefix ``p`` at level ``L`` starts at
    ``cfull[p << (depth - L)]``.
    """

    bwt: np.ndarray
    C: np.ndarray  # length sigma + 2
    sigma: int
    depth: int
    ones: np.ndarray  # (depth, n + 1)
    cfull: np.ndarray  # C extended to 2**depth + 1 entries
    sa: np.ndarray | None = None
    _lists: tuple | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.bwt)

    # -- pure-python accessors (lists are much faster than numpy scalars) --
    def _py(self):
        if self._lists is None:
            self._lists = (self.ones.tolist(), self.cfull.tolist())
        return self._lists

    def _check_code(self, c: int) -> None:
        if not 0 <= c <= self.sigma:
            raise IndexError(f"code {c} outside [0..{self.sigma}]")

    def rank(self, c: int, i: int) -> int:
        """Occurrences of code ``c`` in ``bwt[1..i]``."""
        self._check_code(c)
        if not 0 <= i <= self.n:
            raise IndexError(f"position {i} outside [0..{self.n}]")
        ones, cfull = self._py()
        d = self.depth
        start, prefix, lo = 0, 0, i
        for level in range(d):
            bit = (c >> (d - 1 - level)) & 1
            row = ones[level]
            one = row[start + lo] - row[start]
            prefix = (prefix << 1) | bit
            lo = one if bit else lo - one
            start = cfull[prefix << (d - 1 - level)]
        return lo

    def distinct(self, lo: int, hi: int, out: list) -> None:
        """Append ``(c, rank(c, lo), rank(c, hi))`` for every code in ``bwt[lo:hi]``.

        0-based half-open; codes come out ascending.
        """
        ones, cfull = self._py()
        d = self.depth
        stack = [(0, 0, 0, lo, hi)]
        while stack:
            level, prefix, start, l, r = stack.pop()
            if level == d:
                out.append((prefix, l, r))
                continue
            row = ones[level]
            base = row[start]
            ol = row[start + l] - base
            orr = row[start + r] - base
            shift = d - 1 - level
            if orr > ol:
                p1 = (prefix << 1) | 1
                stack.append((level + 1, p1, cfull[p1 << shift], ol, orr))
            if r - orr > l - ol:
                p0 = prefix << 1
                stack.append((level + 1, p0, cfull[p0 << shift], l - ol, r - orr))

    def range_distinct(self, i: int, j: int) -> list[tuple[int, int, int]]:
        """Distinct codes of ``bwt[i..j]`` (1-based, inclusive) with rank bounds."""
        if not 1 <= i <= j <= self.n:
            raise IndexError(f"bad range [{i}..{j}] for n={self.n}")
        out: list = []
        self.distinct(i - 1, j, out)
        return out

    def backward_search(self, pattern) -> tuple[int, int] | None:
        """1-based inclusive suffix interval of ``pattern``, or ``None``."""
        sp, ep = 0, self.n
        for c in reversed(list(pattern)):
            if not 0 <= c <= self.sigma:
                return None
            base = int(self.C[c])
            sp, ep = base + self.rank(c, sp), base + self.rank(c, ep)
            if sp >= ep:
                return None
        return sp + 1, ep


def build_index(text: Text, keep_sa: bool = False) -> BwtIndex:
    sigma = text.sigma
    if sigma * sigma * math.log2(text.n) ** 2 > 2**26:
        log.warning("sigma=%d: traversal stack bound sigma^2 log^2 n exceeds 2^26 bits", sigma)
    sa = suffix_array(text.symbols)
    bwt = text.symbols[(sa - 1) % text.n]
    counts = np.bincount(bwt, minlength=sigma + 1).astype(np.int64)
    C = np.concatenate(([0], np.cumsum(counts)))
    depth = max(1, (sigma).bit_length())  # codes 0..sigma need this many bits
    width = 1 << depth
    cfull = np.full(width + 1, len(bwt), dtype=np.int64)
    cfull[: sigma + 2] = C
    dtype = np.int32 if len(bwt) < 2**31 else np.int64
    ones = np.empty((depth, len(bwt) + 1), dtype=dtype)
    codes = bwt.astype(np.int64)
    for level in range(depth):
        if level:
            order = np.argsort(codes >> (depth - level), kind="stable")
            seq = codes[order]
        else:
            seq = codes
        ones[level, 0] = 0
        np.cumsum((seq >> (depth - 1 - level)) & 1, out=ones[level, 1:])
    return BwtIndex(bwt=bwt, C=C, sigma=sigma, depth=depth, ones=ones, cfull=cfull,
                    sa=sa if keep_sa else None)
