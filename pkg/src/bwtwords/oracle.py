"""Brute-force references built from direct string scanning.

Nothing here touches the BWT, the traversal or the border recursions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

MAX_ORACLE_N = 5000
MAX_MOMENT_LEN = 500


class OracleLimit(ValueError):
    pass


@dataclass
class NaiveTable:
    """Substrings of ``T`` (terminator excluded) keyed by code tuples.

    ``left``/``right`` contexts use 0 for the terminator, read circularly.
    """

    text: tuple
    counts: dict = field(default_factory=dict)
    left: dict = field(default_factory=dict)
    right: dict = field(default_factory=dict)
    alphabet: tuple = ()
    right_maximal: set = field(default_factory=set)
    maximal_repeats: set = field(default_factory=set)
    minimal_rare: dict = field(default_factory=dict)
    minimal_absent: set = field(default_factory=set)

    def count(self, w) -> int:
        w = tuple(w)
        if not w:
            return len(self.text) + 1
        if w in self.counts:
            return self.counts[w]
        return _count_direct(self.text, w)


def _count_direct(text, w) -> int:
    m = len(w)
    return sum(1 for i in range(len(text) - m + 1) if tuple(text[i:i + m]) == w)


def naive_classes(codes, cap: int = MAX_ORACLE_N) -> NaiveTable:
    """Every substring class by enumeration, lengths growing until nothing repeats."""
    text = tuple(int(c) for c in codes)
    if len(text) + 1 > cap:
        raise OracleLimit(f"oracle capped at n={cap}")
    N = len(text)
    tab = NaiveTable(text=text, alphabet=tuple(sorted(set(text))))
    eps = ()
    tab.left[eps] = set(text) | {0}
    tab.right[eps] = set(text) | {0}
    tab.right_maximal.add(eps)
    if len(tab.left[eps]) >= 2:
        tab.maximal_repeats.add(eps)
    L = 1
    while L <= N:
        cnt = defaultdict(int)
        lft = defaultdict(set)
        rgt = defaultdict(set)
        for i in range(N - L + 1):
            w = text[i:i + L]
            cnt[w] += 1
            lft[w].add(text[i - 1] if i > 0 else 0)
            rgt[w].add(text[i + L] if i + L < N else 0)
        tab.counts.update(cnt)
        tab.left.update(lft)
        tab.right.update(rgt)
        repeated = False
        for w, f in cnt.items():
            if f >= 2:
                repeated = True
                if len(rgt[w]) >= 2:
                    tab.right_maximal.add(w)
                    if len(lft[w]) >= 2:
                        tab.maximal_repeats.add(w)
        if not repeated:
            break
        L += 1
    # rare words need f(aX) >= 2, so aX is at most as long as the longest repeat
    for w, f in tab.counts.items():
        if len(w) >= 2 and f < tab.counts[w[:-1]] and f < tab.counts[w[1:]]:
            tab.minimal_rare[w] = f
    # an absent aXb with aX, Xb present forces X to repeat, which bounds |aX|
    for w in list(tab.counts):
        x = w[1:]
        if x and tab.counts.get(x, 0) < 2:
            continue
        for b in tab.alphabet:
            cand = w + (b,)
            xb = x + (b,)
            if xb not in tab.counts:
                continue
            present = cand in tab.counts if len(cand) <= L else _count_direct(text, cand) > 0
            if not present:
                tab.minimal_absent.add(cand)
    return tab


def failure_function(w) -> list[int]:
    """Classical border array: entry ``i`` is the longest border of ``w[:i+1]``."""
    w = list(w)
    fail = [0] * len(w)
    k = 0
    for i in range(1, len(w)):
        while k and w[i] != w[k]:
            k = fail[k - 1]
        if w[i] == w[k]:
            k += 1
        fail[i] = k
    return fail


def border_set(w) -> list[int]:
    """All proper border lengths of ``w``, longest first, by direct comparison."""
    w = tuple(w)
    m = len(w)
    return [b for b in range(m - 1, 0, -1) if w[:b] == w[m - b:]]


def pi_of(w, P) -> float:
    out = 1.0
    for c in w:
        out *= P[c]
    return out


def definitional_phi_gamma(w, P, N):
    w = tuple(w)
    m = len(w)
    phi = gamma = 0.0
    for b in border_set(w):
        pr = pi_of(w[b:], P)
        phi += (N - 2 * m + b + 1) * pr
        gamma += pr
    return phi, gamma


def exact_moments(w, P, N):
    """E and V of the linear occurrence count in an IID text of length ``N``.

    Sums Cov(X_i, X_j) over all ordered position pairs, grouped by shift: a
    shift ``d`` has ``K - d`` pairs and joint probability ``p * pi(w[m-d:])``
    when ``w`` overlaps itself at that shift.
    """
    w = tuple(w)
    m = len(w)
    if m > MAX_MOMENT_LEN:
        raise OracleLimit(f"moments oracle capped at length {MAX_MOMENT_LEN}")
    K = N - m + 1
    if K <= 0:
        return 0.0, 0.0
    p = pi_of(w, P)
    E = K * p
    V = K * (p - p * p)
    for d in range(1, min(m, K)):
        joint = p * pi_of(w[m - d:], P) if w[d:] == w[:m - d] else 0.0
        V += 2 * (K - d) * (joint - p * p)
    return E, V


def exact_moments_pairs(w, P, N):
    """Literal double loop over position pairs; only for tiny ``N``."""
    w = tuple(w)
    m = len(w)
    K = N - m + 1
    p = pi_of(w, P)
    V = 0.0
    for i in range(K):
        for j in range(K):
            d = abs(i - j)
            if d == 0:
                joint = p
            elif d < m and w[d:] == w[:m - d]:
                joint = p * pi_of(w[m - d:], P)
            else:
                joint = p * p if d >= m else 0.0
            V += joint - p * p
    return K * p, V


def enumerate_moments(w, probs, N):
    """E and V by summing over every text of length ``N`` (tiny alphabets only)."""
    from itertools import product

    w = tuple(w)
    m = len(w)
    codes = list(range(1, len(probs)))
    e1 = e2 = 0.0
    for t in product(codes, repeat=N):
        pr = pi_of(t, probs)
        f = sum(1 for i in range(N - m + 1) if t[i:i + m] == w)
        e1 += pr * f
        e2 += pr * f * f
    return e1, e2 - e1 * e1
