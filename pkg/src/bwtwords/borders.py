"""Border bookkeeping kept in lock-step with the traversal path.

Depth ``l`` of the path holds the suffix of length ``l`` of the current node.
For every code ``b`` a char stack holds, per path depth ``l``, the triple
``(V|b, phi(Vb), gamma(Vb))`` with ``V`` that suffix.  The character of a
length-``M`` path string at offset ``j`` from the left sits at depth ``M - j``.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter

from .scoring import MarkovModel, node_phi_gamma
from .traversal import NodeEvent, Observer, TraversalError

FLOAT_BITS = 64


class Seed:
    """Everything decided about ``aW`` while its parent ``W`` was visited."""

    __slots__ = ("bord", "pi", "phi", "gamma", "store")

    def __init__(self, bord, pi, phi, gamma, store):
        self.bord = bord
        self.pi = pi
        self.phi = phi
        self.gamma = gamma
        self.store = store  # push char-stack entries for this node

    def __repr__(self):
        return f"Seed(bord={self.bord}, pi={self.pi}, phi={self.phi}, gamma={self.gamma})"


class CharStack:
    """Array-backed stack with reads at arbitrary depth.

    Dense in the default configuration (entry ``l`` belongs to depth ``l``);
    with storage economy some depths are skipped and reads bisect.
    """

    __slots__ = ("depths", "wb", "F", "G")

    def __init__(self):
        self.depths: list[int] = []
        self.wb: list[int] = []
        self.F: list[float] = []
        self.G: list[float] = []

    def push(self, depth, wb, F, G):
        if self.depths and self.depths[-1] >= depth:
            raise TraversalError(f"char stack out of order: {self.depths[-1]} then {depth}")
        self.depths.append(depth)
        self.wb.append(wb)
        self.F.append(F)
        self.G.append(G)

    def pop(self, depth):
        if not self.depths or self.depths[-1] != depth:
            raise TraversalError(f"char stack underflow at depth {depth}")
        self.depths.pop()
        self.wb.pop()
        self.F.pop()
        self.G.pop()

    def slot(self, depth) -> int:
        d = self.depths
        if depth < len(d) and d[depth] == depth:
            return depth
        i = bisect_left(d, depth)
        if i == len(d) or d[i] != depth:
            raise TraversalError(f"no char-stack entry at depth {depth}")
        return i

    def __len__(self):
        return len(self.depths)


class BorderEngine(Observer):
    """Maintains bord, B^r, pi/phi/gamma per path depth and the char stacks.

    ``economy`` enables the storage optimisation: phi/gamma only for maximal
    repeats, char-stack entries only for nodes ``aV`` with ``V`` a maximal
    repeat (or the root).
    """

    def __init__(self, model: MarkovModel, sigma: int, n: int, economy: bool = False):
        self.P = [float(x) for x in model.P]
        self.N = model.N
        self.sigma = sigma
        self.economy = economy
        # path stacks
        self.pchar: list = []
        self.ppi: list[float] = []
        self.pphi: list = []
        self.pgamma: list = []
        self.pbord: list[int] = []
        self.pbr: list[tuple] = []
        self.pushed: list[tuple] = []  # codes whose char stack got an entry per depth
        self.stacks = [CharStack() for _ in range(sigma + 1)]
        self.buffer = [0] * (sigma + 1)
        self.node_max: list[bool] = []
        # telemetry and bound counters
        self.depth_reads: Counter = Counter()
        self.br_pairs = 0
        self.char_pushes = 0
        self.stack_bits = 0
        self._cbits = max(1, sigma.bit_length())
        self._pbits = max(1, n.bit_length())

    # -- helpers ---------------------------------------------------------
    @property
    def depth(self) -> int:
        return len(self.pchar) - 1

    def char_at(self, length: int, offset: int) -> int:
        """Character at ``offset`` of the path string of ``length``."""
        return self.pchar[length - offset]

    def pi_suffix(self, length: int) -> float:
        self.depth_reads[length] += 1
        return self.ppi[length]

    def read(self, b: int, depth: int):
        self.depth_reads[depth] += 1
        st = self.stacks[b]
        i = st.slot(depth)
        return st.wb[i], st.F[i], st.G[i]

    def child_bord(self, a: int) -> int:
        """bord(aW) for the current node ``W``; the buffer holds B^r(W)."""
        v = self.buffer[a]
        if v > 0:
            return v + 1
        M = self.depth
        return 1 if M >= 1 and self.pchar[1] == a else 0

    def ext_link(self, length: int, bord: int, b: int) -> int:
        """``S|b`` for a string ``S`` of ``length`` chars with longest border ``bord``.

        ``S`` is the path string of that length or one character longer.

        For the longer case (``S = aW`` hanging off the node ``W``) no separate
        stack level is kept: ``bord(aW) <= |W|``, so the entries already pushed
        for suffixes of ``W`` answer the read. The other layout would push
        ``aW|b`` for every ``b`` of ``W`` on entering each child, costing one
        extra level per node for no change in the values read.
        """
        if bord == 0:
            return 0
        if self.pchar[length - bord] == b:
            return bord
        return self.read(b, bord)[0]

    def ext_scores(self, length: int, u: int, first: int, b: int):
        """Longest border, phi and gamma of ``S b`` given ``u = S|b``."""
        if u > 0:
            beta = u + 1
        elif first == b:
            beta = 1
        else:
            return 0, 0.0, 0.0
        _, Fu, Gu = self.read(b, u)
        delta = self.pi_suffix(length - beta) * self.P[b]
        phi, gamma = node_phi_gamma(delta, Fu, Gu, length + 1, beta, self.N)
        return beta, phi, gamma

    def border_chain_node(self, length: int):
        """(border length, pi of the remaining suffix) for every border of the path string."""
        b = self.pbord[length]
        while b > 0:
            yield b, self.ppi[length - b]
            b = self.pbord[b]

    def border_chain_ext(self, length: int, u: int, first: int, b: int):
        """Same for ``S b`` where ``S`` (``length`` chars) has ``S|b = u``."""
        pb = self.P[b]
        if u > 0:
            beta = u + 1
        elif first == b:
            beta = 1
        else:
            return
        while True:
            yield beta, self.ppi[length - beta] * pb
            # next border of the length-beta string (suffix of length beta-1 of S) + b
            v = beta - 1
            if v == 0:
                return
            w = self.read(b, v)[0]
            if w > 0:
                beta = w + 1
            elif self.pchar[v] == b:
                beta = 1
            else:
                return

    def _entry_bits(self, br_len: int) -> int:
        return self._cbits + 3 * FLOAT_BITS + self._pbits + br_len * (self._cbits + self._pbits)

    # -- observer protocol ------------------------------------------------
    def enter(self, event: NodeEvent) -> None:
        M = event.length
        if M != self.depth + 1:
            raise TraversalError(f"path at depth {self.depth}, entering depth {M}")
        rep = event.repr
        node_is_max = len(event.extensions) >= 2
        if M == 0:
            self.pchar.append(None)
            self.ppi.append(1.0)
            self.pphi.append(0.0)
            self.pgamma.append(0.0)
            self.pbord.append(0)
            self.pbr.append(())
            store = True
        else:
            seed: Seed = event.seed
            beta = seed.bord
            self.pchar.append(event.lead)
            if beta > 0:
                d = self.pchar[beta + 1]
                br = [p for p in self.pbr[beta] if p[0] != d]
                br.append((d, beta))
                br.sort()
                br = tuple(br)
            else:
                br = ()
            self.ppi.append(seed.pi)
            phi, gamma = seed.phi, seed.gamma
            if phi is None and node_is_max:
                delta = self.pi_suffix(M - beta)
                phi, gamma = node_phi_gamma(delta, self.pphi[beta], self.pgamma[beta], M, beta, self.N)
            self.pphi.append(phi)
            self.pgamma.append(gamma)
            self.pbord.append(beta)
            self.pbr.append(br)
            store = seed.store
        self.node_max.append(node_is_max)
        self.br_pairs += len(self.pbr[M])
        self.stack_bits += self._entry_bits(len(self.pbr[M]))

        pushed = ()
        if store:
            pushed = tuple(rep.chars)
            beta = self.pbord[M]
            first = self.pchar[M]
            for b in pushed:
                if M == 0:
                    wb, F, G = 0, 0.0, 0.0
                else:
                    wb = self.ext_link(M, beta, b)
                    _, F, G = self.ext_scores(M, wb, first, b)
                self.stacks[b].push(M, wb, F, G)
            self.char_pushes += len(pushed)
            self.stack_bits += len(pushed) * (self._pbits + 2 * FLOAT_BITS)
        self.pushed.append(pushed)

        # seeds for the children, through the buffer loaded from B^r(W)
        buf = self.buffer
        for c, v in self.pbr[M]:
            buf[c] = v
        pi_w = self.ppi[M]
        keep_scores = not self.economy
        for ext in event.extensions:
            a = ext.a
            if a == 0:
                continue
            beta = self.child_bord(a)
            phi = gamma = None
            if keep_scores:
                if beta > 0:
                    delta = self.pi_suffix(M + 1 - beta)
                    phi, gamma = node_phi_gamma(delta, self.pphi[beta], self.pgamma[beta], M + 1, beta, self.N)
                else:
                    phi, gamma = 0.0, 0.0
            ext.seed = Seed(beta, self.P[a] * pi_w, phi, gamma, keep_scores or node_is_max)
        for c, _ in self.pbr[M]:
            buf[c] = 0

    def exit(self, depth: int) -> None:
        if depth != self.depth:
            raise TraversalError(f"exit at depth {depth} but path is at {self.depth}")
        pushed = self.pushed.pop()
        for b in pushed:
            self.stacks[b].pop(depth)
        br = self.pbr.pop()
        self.stack_bits -= len(pushed) * (self._pbits + 2 * FLOAT_BITS) + self._entry_bits(len(br))
        self.pchar.pop()
        self.ppi.pop()
        self.pphi.pop()
        self.pgamma.pop()
        self.pbord.pop()
        self.node_max.pop()

    def spell(self, length: int) -> tuple:
        """Codes of the path string of ``length`` characters."""
        return tuple(self.pchar[d] for d in range(length, 0, -1))
