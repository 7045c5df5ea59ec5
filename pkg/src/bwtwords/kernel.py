"""Fused, numba-compiled version of the analysis pipeline.

Same traversal order, border rules, float operation order and filtering as
:mod:`bwtwords.engine`, flattened into arrays so multi-megabase inputs finish
in seconds.  The engine module stays the readable reference; tests hold the
two to identical output.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np
from numba import njit

from . import scoring
from .engine import AnalysisResult, Counters, check_bounds
from .scoring import MarkovModel, ScoreRecord, Thresholds
from .text_index import BwtIndex
from .traversal import TraversalStats

_phi_gamma = njit(cache=True)(scoring.node_phi_gamma)
_pair_term = njit(cache=True)(scoring.pair_term)
_fstar = njit(cache=True)(scoring.fstar)
_zscore = njit(cache=True)(scoring.zscore)
_clamp = njit(cache=True)(scoring.clamp_variance)


@njit(cache=True)
def _moments(m, p, phi, N):
    # scoring.moments calls pair_term; keep the identical expression here
    E = (N - m + 1) * p
    V = E * (1.0 - p) + 2.0 * p * phi - p * p * _pair_term(m, N)
    return E, V


@njit(cache=True)
def _grow1(a, need):
    if need <= a.shape[0]:
        return a
    cap = a.shape[0] * 2
    while cap < need:
        cap *= 2
    out = np.empty(cap, a.dtype)
    out[: a.shape[0]] = a
    return out


@njit(cache=True)
def _grow2(a, need):
    if need <= a.shape[1]:
        return a
    cap = a.shape[1] * 2
    while cap < need:
        cap *= 2
    out = np.empty((a.shape[0], cap), a.dtype)
    out[:, : a.shape[1]] = a
    return out


@njit(cache=True)
def _distinct(ones, cfull, D, lo, hi, out_c, out_lo, out_hi, stk):
    cnt = 0
    stk[0] = 0
    stk[1] = 0
    stk[2] = 0
    stk[3] = lo
    stk[4] = hi
    sp = 1
    while sp > 0:
        sp -= 1
        q = sp * 5
        level = stk[q]
        prefix = stk[q + 1]
        start = stk[q + 2]
        l = stk[q + 3]
        r = stk[q + 4]
        if level == D:
            out_c[cnt] = prefix
            out_lo[cnt] = l
            out_hi[cnt] = r
            cnt += 1
            continue
        base = ones[level, start]
        ol = ones[level, start + l] - base
        orr = ones[level, start + r] - base
        shift = D - 1 - level
        if orr > ol:
            p1 = (prefix << 1) | 1
            q = sp * 5
            stk[q] = level + 1
            stk[q + 1] = p1
            stk[q + 2] = cfull[p1 << shift]
            stk[q + 3] = ol
            stk[q + 4] = orr
            sp += 1
        if r - orr > l - ol:
            p0 = prefix << 1
            q = sp * 5
            stk[q] = level + 1
            stk[q + 1] = p0
            stk[q + 2] = cfull[p0 << shift]
            stk[q + 3] = l - ol
            stk[q + 4] = r - orr
            sp += 1
    return cnt


@njit(cache=True)
def _slot(S_depth, S_top, b, depth):
    top = S_top[b]
    if depth < top and S_depth[b, depth] == depth:
        return depth
    lo = 0
    hi = top
    while lo < hi:
        mid = (lo + hi) // 2
        if S_depth[b, mid] < depth:
            lo = mid + 1
        else:
            hi = mid
    if lo == top or S_depth[b, lo] != depth:
        return -1
    return lo


@njit(cache=True)
def _ext_link(pchar, S_depth, S_top, S_wb, reads, length, bord, b):
    if bord == 0:
        return 0
    if pchar[length - bord] == b:
        return bord
    reads[bord] += 1
    i = _slot(S_depth, S_top, b, bord)
    if i < 0:
        raise RuntimeError("char stack read below its live range")
    return S_wb[b, i]


@njit(cache=True)
def _ext_scores(ppi, P, N, S_depth, S_top, S_F, S_G, reads, length, u, first, b):
    if u > 0:
        beta = u + 1
    elif first == b:
        beta = 1
    else:
        return 0, 0.0, 0.0
    reads[u] += 1
    i = _slot(S_depth, S_top, b, u)
    if i < 0:
        raise RuntimeError("char stack read below its live range")
    Fu = S_F[b, i]
    Gu = S_G[b, i]
    reads[length - beta] += 1
    delta = ppi[length - beta] * P[b]
    phi, gamma = _phi_gamma(delta, Fu, Gu, length + 1, beta, N)
    return beta, phi, gamma


@njit(cache=True)
def _clip_node(ppi, pbord, M, N):
    m = M
    K = N - m + 1
    phi = 0.0
    b = pbord[M]
    while b > 0:
        coef = K - (m - b)
        if coef > 0:
            phi += coef * ppi[M - b]
        b = pbord[b]
    return phi


@njit(cache=True)
def _clip_ext(pchar, ppi, P, N, S_depth, S_top, S_wb, reads, length, u, first, b):
    m = length + 1
    K = N - m + 1
    pb = P[b]
    phi = 0.0
    if u > 0:
        beta = u + 1
    elif first == b:
        beta = 1
    else:
        return phi
    while True:
        coef = K - (m - beta)
        if coef > 0:
            phi += coef * (ppi[length - beta] * pb)
        v = beta - 1
        if v == 0:
            return phi
        reads[v] += 1
        i = _slot(S_depth, S_top, b, v)
        w = S_wb[b, i]
        if w > 0:
            beta = w + 1
        elif pchar[v] == b:
            beta = 1
        else:
            return phi


@njit(cache=True)
def _score(m, f, p, phi_eff, bord, N, cls, mode_all, has_zmin, zmin, has_zmax, zmax, cnt):
    """Returns (keep, E, V, z, fstar); cnt = [unscored, negvar, underflow]."""
    if m > N or p <= 0.0:
        if p <= 0.0:
            cnt[2] += 1
        cnt[0] += 1
        keep = mode_all or (not has_zmin and not has_zmax)
        return keep, math.nan, math.nan, math.nan, 0
    E, V = _moments(m, p, phi_eff, N)
    Vc = _clamp(V)
    if Vc != V and Vc != Vc:
        cnt[1] += 1
    fs = _fstar(m, bord, N)
    z = _zscore(f, E, Vc)
    if mode_all:
        keep = True
    elif cls == 0:
        keep = (not has_zmin) or z >= zmin
    else:
        keep = (not has_zmax) or z <= zmax
    return keep, E, Vc, z, fs


@njit(cache=True)
def run_kernel(ones, cfull, C, sigma, n, D, P, N, want_over, want_under, mode_all,
               has_zmin, zmin, has_zmax, zmax, max_len, economy, sample_every):
    S1 = sigma + 1
    cbits = max(1, sigma)
    # bit_length by hand
    cb = 0
    while cbits > 0:
        cb += 1
        cbits >>= 1
    cbits = max(1, cb)
    pb_ = 0
    x = n
    while x > 0:
        pb_ += 1
        x >>= 1
    pbits = max(1, pb_)

    # traversal frames
    fcap = 64
    fr_len = np.empty(fcap, np.int64)
    fr_lead = np.empty(fcap, np.int64)
    fr_bord = np.empty(fcap, np.int64)
    fr_pi = np.empty(fcap, np.float64)
    fr_phi = np.empty(fcap, np.float64)
    fr_gamma = np.empty(fcap, np.float64)
    fr_store = np.empty(fcap, np.bool_)
    fr_k = np.empty(fcap, np.int64)
    fr_off = np.empty(fcap, np.int64)
    pool_c = np.empty(256, np.int64)
    pool_f = np.empty(256, np.int64)
    ptop_c = 0
    ptop_f = 0  # pool_f entries of frame j start at fr_off[j] + j
    nfr = 0

    cur_c = np.empty(S1 + 1, np.int64)
    cur_f = np.empty(S1 + 2, np.int64)
    slot_k = np.zeros(S1, np.int64)
    ext_c = np.empty((S1, S1 + 1), np.int64)
    ext_f = np.empty((S1, S1 + 2), np.int64)
    order = np.empty(S1, np.int64)
    ext_bord = np.zeros(S1, np.int64)
    ext_pi = np.zeros(S1, np.float64)
    ext_phi = np.zeros(S1, np.float64)
    ext_gamma = np.zeros(S1, np.float64)
    out_c = np.empty(S1, np.int64)
    out_lo = np.empty(S1, np.int64)
    out_hi = np.empty(S1, np.int64)
    stk = np.empty(5 * (2 * D + 4), np.int64)
    kid = np.empty(S1, np.int64)
    buffer = np.zeros(S1, np.int64)
    freq = np.zeros(S1, np.int64)

    # path stacks
    pcap = 64
    pchar = np.empty(pcap, np.int64)
    ppi = np.empty(pcap, np.float64)
    pphi = np.empty(pcap, np.float64)
    pgamma = np.empty(pcap, np.float64)
    pbord = np.empty(pcap, np.int64)
    br_off = np.empty(pcap, np.int64)
    br_len = np.empty(pcap, np.int64)
    push_off = np.empty(pcap, np.int64)
    push_len = np.empty(pcap, np.int64)
    reads = np.zeros(pcap, np.int64)
    br_c = np.empty(256, np.int64)
    br_v = np.empty(256, np.int64)
    push_codes = np.empty(256, np.int64)
    S_depth = np.empty((S1, 16), np.int64)
    S_wb = np.empty((S1, 16), np.int64)
    S_F = np.empty((S1, 16), np.float64)
    S_G = np.empty((S1, 16), np.float64)
    S_top = np.zeros(S1, np.int64)

    # records
    rcap = 1024
    r_cls = np.empty(rcap, np.int8)
    r_len = np.empty(rcap, np.int64)
    r_f = np.empty(rcap, np.int64)
    r_E = np.empty(rcap, np.float64)
    r_V = np.empty(rcap, np.float64)
    r_z = np.empty(rcap, np.float64)
    r_fs = np.empty(rcap, np.int64)
    r_bord = np.empty(rcap, np.int64)
    r_off = np.empty(rcap, np.int64)
    codes = np.empty(4096, np.uint8)
    nrec = 0
    ncode = 0

    # counters: unscored, negvar, underflow, maws, rare, maxrep, rightmax, br_pairs, char_pushes
    cnt = np.zeros(9, np.int64)
    # stats: nodes, max_frames, max_bits, total_bits, left_ext, weiner
    st = np.zeros(6, np.int64)
    scap = 64
    s_node = np.empty(scap, np.int64)
    s_depth = np.empty(scap, np.int64)
    s_frames = np.empty(scap, np.int64)
    s_bits = np.empty(scap, np.int64)
    nsamp = 0

    border_bits = 0

    # root frame
    k = 0
    for c in range(S1):
        if C[c + 1] > C[c]:
            pool_c[k] = c
            pool_f[k] = C[c]
            k += 1
    pool_f[k] = n
    fr_len[0] = 0
    fr_lead[0] = -1
    fr_bord[0] = 0
    fr_pi[0] = 1.0
    fr_phi[0] = 0.0
    fr_gamma[0] = 0.0
    fr_store[0] = True
    fr_k[0] = k
    fr_off[0] = 0
    ptop_c = k
    ptop_f = k + 1
    nfr = 1
    frame_total = k * cbits + (k + 2) * pbits + pbits + 192
    depth = -1

    while nfr > 0:
        nfr -= 1
        L = fr_len[nfr]
        lead = fr_lead[nfr]
        k = fr_k[nfr]
        off = fr_off[nfr]
        offf = off + nfr
        for i in range(k):
            cur_c[i] = pool_c[off + i]
        for i in range(k + 1):
            cur_f[i] = pool_f[offf + i]
        ptop_c = off
        ptop_f = offf
        frame_total -= k * cbits + (k + 2) * pbits + pbits + 192
        seed_bord = fr_bord[nfr]
        seed_pi = fr_pi[nfr]
        seed_phi = fr_phi[nfr]
        seed_gamma = fr_gamma[nfr]
        seed_store = fr_store[nfr]

        # exits
        while depth >= L:
            o = push_off[depth]
            for j in range(push_len[depth]):
                b = push_codes[o + j]
                S_top[b] -= 1
            border_bits -= push_len[depth] * (pbits + 128)
            border_bits -= cbits + 192 + pbits + br_len[depth] * (cbits + pbits)
            depth -= 1
        depth = L
        M = L

        # extendLeft
        n_ext = 0
        for i in range(k):
            m_ = _distinct(ones, cfull, D, cur_f[i], cur_f[i + 1], out_c, out_lo, out_hi, stk)
            for j in range(m_):
                a = out_c[j]
                if slot_k[a] == 0:
                    order[n_ext] = a
                    n_ext += 1
                    ext_f[a, 0] = C[a] + out_lo[j]
                ext_c[a, slot_k[a]] = cur_c[i]
                slot_k[a] += 1
                ext_f[a, slot_k[a]] = C[a] + out_hi[j]
        is_max = n_ext >= 2
        width = cur_f[k] - cur_f[0]

        # ---- border engine: path entry ----
        if M + 2 > pcap:
            pcap2 = pcap * 2
            pchar = _grow1(pchar, pcap2)
            ppi = _grow1(ppi, pcap2)
            pphi = _grow1(pphi, pcap2)
            pgamma = _grow1(pgamma, pcap2)
            pbord = _grow1(pbord, pcap2)
            br_off = _grow1(br_off, pcap2)
            br_len = _grow1(br_len, pcap2)
            push_off = _grow1(push_off, pcap2)
            push_len = _grow1(push_len, pcap2)
            r2 = np.zeros(pcap2, np.int64)
            r2[:pcap] = reads
            reads = r2
            pcap = pcap2
        bo = 0 if M == 0 else br_off[M - 1] + br_len[M - 1]
        br_off[M] = bo
        if M == 0:
            pchar[0] = -1
            ppi[0] = 1.0
            pphi[0] = 0.0
            pgamma[0] = 0.0
            pbord[0] = 0
            br_len[0] = 0
            store = True
        else:
            beta = seed_bord
            pchar[M] = lead
            nb = 0
            if beta > 0:
                d = pchar[beta + 1]
                need = bo + br_len[beta] + 1
                br_c = _grow1(br_c, need)
                br_v = _grow1(br_v, need)
                src = br_off[beta]
                inserted = False
                for j in range(br_len[beta]):
                    c = br_c[src + j]
                    if c == d:
                        continue
                    if not inserted and c > d:
                        br_c[bo + nb] = d
                        br_v[bo + nb] = beta
                        nb += 1
                        inserted = True
                    br_c[bo + nb] = c
                    br_v[bo + nb] = br_v[src + j]
                    nb += 1
                if not inserted:
                    br_c[bo + nb] = d
                    br_v[bo + nb] = beta
                    nb += 1
            br_len[M] = nb
            ppi[M] = seed_pi
            phi = seed_phi
            gamma = seed_gamma
            if phi != phi and is_max:
                reads[M - beta] += 1
                delta = ppi[M - beta]
                phi, gamma = _phi_gamma(delta, pphi[beta], pgamma[beta], M, beta, N)
            pphi[M] = phi
            pgamma[M] = gamma
            pbord[M] = beta
            store = seed_store
        cnt[7] += br_len[M]
        border_bits += cbits + 192 + pbits + br_len[M] * (cbits + pbits)

        po = 0 if M == 0 else push_off[M - 1] + push_len[M - 1]
        push_off[M] = po
        if store:
            push_codes = _grow1(push_codes, po + k)
            beta = pbord[M]
            first = pchar[M]
            for i in range(k):
                b = cur_c[i]
                if M == 0:
                    wb = 0
                    F = 0.0
                    G = 0.0
                else:
                    wb = _ext_link(pchar, S_depth, S_top, S_wb, reads, M, beta, b)
                    _, F, G = _ext_scores(ppi, P, N, S_depth, S_top, S_F, S_G, reads, M, wb, first, b)
                t = S_top[b]
                if t >= S_depth.shape[1]:
                    S_depth = _grow2(S_depth, t + 1)
                    S_wb = _grow2(S_wb, t + 1)
                    S_F = _grow2(S_F, t + 1)
                    S_G = _grow2(S_G, t + 1)
                S_depth[b, t] = M
                S_wb[b, t] = wb
                S_F[b, t] = F
                S_G[b, t] = G
                S_top[b] = t + 1
                push_codes[po + i] = b
            push_len[M] = k
            cnt[8] += k
            border_bits += k * (pbits + 128)
        else:
            push_len[M] = 0

        # child seeds via the buffer
        o = br_off[M]
        for j in range(br_len[M]):
            buffer[br_c[o + j]] = br_v[o + j]
        pi_w = ppi[M]
        for e in range(n_ext):
            a = order[e]
            if a == 0:
                continue
            v = buffer[a]
            if v > 0:
                beta = v + 1
            elif M >= 1 and pchar[1] == a:
                beta = 1
            else:
                beta = 0
            ext_bord[a] = beta
            ext_pi[a] = P[a] * pi_w
            if not economy:
                if beta > 0:
                    reads[M + 1 - beta] += 1
                    delta = ppi[M + 1 - beta]
                    ph, ga = _phi_gamma(delta, pphi[beta], pgamma[beta], M + 1, beta, N)
                else:
                    ph = 0.0
                    ga = 0.0
            else:
                ph = math.nan
                ga = math.nan
            ext_phi[a] = ph
            ext_gamma[a] = ga
        for j in range(br_len[M]):
            buffer[br_c[o + j]] = 0

        # ---- analyzer ----
        # worst case this node emits 1 + S1 + S1*S1 records of length <= M + 2
        need = nrec + 1 + S1 + S1 * S1
        if need > r_cls.shape[0]:
            r_cls = _grow1(r_cls, need)
            r_len = _grow1(r_len, need)
            r_f = _grow1(r_f, need)
            r_E = _grow1(r_E, need)
            r_V = _grow1(r_V, need)
            r_z = _grow1(r_z, need)
            r_fs = _grow1(r_fs, need)
            r_bord = _grow1(r_bord, need)
            r_off = _grow1(r_off, need)
        codes = _grow1(codes, ncode + (1 + S1 + S1 * S1) * (M + 2))

        if M > 0:
            cnt[6] += 1
            if is_max:
                cnt[5] += 1
        fits_m = max_len < 0 or M <= max_len
        if M > 0 and fits_m and (mode_all or (is_max and want_over)):
            cls = 0 if is_max else 3
            if 2 * M - 2 > N and M <= N and ppi[M] > 0.0:
                phe = _clip_node(ppi, pbord, M, N)
            else:
                phe = pphi[M]
            keep, E, V, z, fs = _score(M, width, ppi[M], phe, pbord[M], N, cls, mode_all,
                                       has_zmin, zmin, has_zmax, zmax, cnt)
            if keep:
                r_cls[nrec] = cls
                r_len[nrec] = M
                r_f[nrec] = width
                r_E[nrec] = E
                r_V[nrec] = V
                r_z[nrec] = z
                r_fs[nrec] = fs
                r_bord[nrec] = pbord[M]
                r_off[nrec] = ncode
                for dd in range(M, 0, -1):
                    codes[ncode] = pchar[dd]
                    ncode += 1
                nrec += 1
        if mode_all and (max_len < 0 or M + 1 <= max_len):
            first = pchar[M] if M > 0 else -1
            for i in range(k):
                ch = cur_c[i]
                if ch == 0:
                    continue
                reads[M] += 1
                si = _slot(S_depth, S_top, ch, M)
                wb = S_wb[ch, si]
                beta, _, _ = _ext_scores(ppi, P, N, S_depth, S_top, S_F, S_G, reads, M, wb, first, ch)
                if 2 * (M + 1) - 2 > N and M + 1 <= N and ppi[M] * P[ch] > 0.0:
                    phe = _clip_ext(pchar, ppi, P, N, S_depth, S_top, S_wb, reads, M, wb, first, ch)
                else:
                    phe = S_F[ch, si]
                f = cur_f[i + 1] - cur_f[i]
                keep, E, V, z, fs = _score(M + 1, f, ppi[M] * P[ch], phe, beta, N, 4, mode_all,
                                           has_zmin, zmin, has_zmax, zmax, cnt)
                if keep:
                    r_cls[nrec] = 4
                    r_len[nrec] = M + 1
                    r_f[nrec] = f
                    r_E[nrec] = E
                    r_V[nrec] = V
                    r_z[nrec] = z
                    r_fs[nrec] = fs
                    r_bord[nrec] = beta
                    r_off[nrec] = ncode
                    for dd in range(M, 0, -1):
                        codes[ncode] = pchar[dd]
                        ncode += 1
                    codes[ncode] = ch
                    ncode += 1
                    nrec += 1
        if is_max and (want_under or mode_all):
            for i in range(k):
                freq[cur_c[i]] = cur_f[i + 1] - cur_f[i]
            want = want_under and (max_len < 0 or M + 2 <= max_len)
            Lx = M + 1
            for e in range(n_ext):
                a = order[e]
                if a == 0:
                    continue
                ka = slot_k[a]
                # minimal rare: aW right-maximal and f(aWb) < f(Wb)
                if ka > 1:
                    for j in range(ka):
                        ch = ext_c[a, j]
                        if ch == 0:
                            continue
                        f = ext_f[a, j + 1] - ext_f[a, j]
                        if f < freq[ch]:
                            cnt[4] += 1
                            if want:
                                u = _ext_link(pchar, S_depth, S_top, S_wb, reads, Lx, ext_bord[a], ch)
                                beta, F, G = _ext_scores(ppi, P, N, S_depth, S_top, S_F, S_G, reads,
                                                         Lx, u, a, ch)
                                if 2 * (M + 2) - 2 > N and M + 2 <= N and P[a] * pi_w * P[ch] > 0.0:
                                    phe = _clip_ext(pchar, ppi, P, N, S_depth, S_top, S_wb, reads,
                                                    Lx, u, a, ch)
                                else:
                                    phe = F
                                keep, E, V, z, fs = _score(M + 2, f, P[a] * pi_w * P[ch], phe, beta, N, 1,
                                                           mode_all, has_zmin, zmin, has_zmax, zmax, cnt)
                                if keep:
                                    r_cls[nrec] = 1
                                    r_len[nrec] = M + 2
                                    r_f[nrec] = f
                                    r_E[nrec] = E
                                    r_V[nrec] = V
                                    r_z[nrec] = z
                                    r_fs[nrec] = fs
                                    r_bord[nrec] = beta
                                    r_off[nrec] = ncode
                                    codes[ncode] = a
                                    ncode += 1
                                    for dd in range(M, 0, -1):
                                        codes[ncode] = pchar[dd]
                                        ncode += 1
                                    codes[ncode] = ch
                                    ncode += 1
                                    nrec += 1
                # minimal absent: Wb occurs, aWb does not
                j = 0
                for i in range(k):
                    ch = cur_c[i]
                    while j < ka and ext_c[a, j] < ch:
                        j += 1
                    if ch == 0 or (j < ka and ext_c[a, j] == ch):
                        continue
                    cnt[3] += 1
                    if not want:
                        continue
                    u = _ext_link(pchar, S_depth, S_top, S_wb, reads, Lx, ext_bord[a], ch)
                    beta, F, G = _ext_scores(ppi, P, N, S_depth, S_top, S_F, S_G, reads, Lx, u, a, ch)
                    if 2 * (M + 2) - 2 > N and M + 2 <= N and P[a] * pi_w * P[ch] > 0.0:
                        phe = _clip_ext(pchar, ppi, P, N, S_depth, S_top, S_wb, reads, Lx, u, a, ch)
                    else:
                        phe = F
                    keep, E, V, z, fs = _score(M + 2, 0, P[a] * pi_w * P[ch], phe, beta, N, 2,
                                               mode_all, has_zmin, zmin, has_zmax, zmax, cnt)
                    if keep:
                        r_cls[nrec] = 2
                        r_len[nrec] = M + 2
                        r_f[nrec] = 0
                        r_E[nrec] = E
                        r_V[nrec] = V
                        r_z[nrec] = z
                        r_fs[nrec] = fs
                        r_bord[nrec] = beta
                        r_off[nrec] = ncode
                        codes[ncode] = a
                        ncode += 1
                        for dd in range(M, 0, -1):
                            codes[ncode] = pchar[dd]
                            ncode += 1
                        codes[ncode] = ch
                        ncode += 1
                        nrec += 1
            for i in range(k):
                freq[cur_c[i]] = 0

        st[0] += 1
        st[4] += n_ext
        for e in range(n_ext):
            if order[e] != 0:
                st[5] += 1

        # push right-maximal children, largest interval first (stable on ties)
        if max_len < 0 or M < max_len:
            nk = 0
            for e in range(n_ext):
                a = order[e]
                if a != 0 and slot_k[a] > 1:
                    w = ext_f[a, slot_k[a]] - ext_f[a, 0]
                    j = nk
                    while j > 0:
                        pa = kid[j - 1]
                        if ext_f[pa, slot_k[pa]] - ext_f[pa, 0] < w:
                            kid[j] = pa
                            j -= 1
                        else:
                            break
                    kid[j] = a
                    nk += 1
            for j in range(nk):
                a = kid[j]
                ka = slot_k[a]
                if nfr >= fr_len.shape[0]:
                    fc = nfr * 2
                    fr_len = _grow1(fr_len, fc)
                    fr_lead = _grow1(fr_lead, fc)
                    fr_bord = _grow1(fr_bord, fc)
                    fr_pi = _grow1(fr_pi, fc)
                    fr_phi = _grow1(fr_phi, fc)
                    fr_gamma = _grow1(fr_gamma, fc)
                    fr_store = _grow1(fr_store, fc)
                    fr_k = _grow1(fr_k, fc)
                    fr_off = _grow1(fr_off, fc)
                pool_c = _grow1(pool_c, ptop_c + ka)
                pool_f = _grow1(pool_f, ptop_f + ka + 1)
                fr_len[nfr] = M + 1
                fr_lead[nfr] = a
                fr_bord[nfr] = ext_bord[a]
                fr_pi[nfr] = ext_pi[a]
                fr_phi[nfr] = ext_phi[a]
                fr_gamma[nfr] = ext_gamma[a]
                fr_store[nfr] = (not economy) or is_max
                fr_k[nfr] = ka
                fr_off[nfr] = ptop_c
                for i in range(ka):
                    pool_c[ptop_c + i] = ext_c[a, i]
                for i in range(ka + 1):
                    pool_f[ptop_f + i] = ext_f[a, i]
                ptop_c += ka
                ptop_f += ka + 1
                nfr += 1
                frame_total += ka * cbits + (ka + 2) * pbits + pbits + 192
        for e in range(n_ext):
            slot_k[order[e]] = 0

        bits = frame_total + border_bits
        if nfr > st[1]:
            st[1] = nfr
        if bits > st[2]:
            st[2] = bits
        st[3] += bits
        if sample_every > 0 and st[0] % sample_every == 0:
            if nsamp >= s_node.shape[0]:
                s_node = _grow1(s_node, nsamp + 1)
                s_depth = _grow1(s_depth, nsamp + 1)
                s_frames = _grow1(s_frames, nsamp + 1)
                s_bits = _grow1(s_bits, nsamp + 1)
            s_node[nsamp] = st[0]
            s_depth[nsamp] = M
            s_frames[nsamp] = nfr
            s_bits[nsamp] = bits
            nsamp += 1

    return (r_cls[:nrec], r_len[:nrec], r_f[:nrec], r_E[:nrec], r_V[:nrec], r_z[:nrec],
            r_fs[:nrec], r_bord[:nrec], r_off[:nrec], codes[:ncode], cnt, st, reads,
            s_node[:nsamp], s_depth[:nsamp], s_frames[:nsamp], s_bits[:nsamp])


class KernelRecords:
    """Columnar records straight out of the kernel."""

    def __init__(self, cls, length, f, E, V, z, fstar, bord, off, codes):
        self.cls = cls
        self.length = length
        self.f = f
        self.E = E
        self.V = V
        self.z = z
        self.fstar = fstar
        self.bord = bord
        self.off = off
        self.codes = codes

    def __len__(self):
        return len(self.cls)

    def word(self, i) -> tuple:
        o = self.off[i]
        return tuple(int(c) for c in self.codes[o:o + self.length[i]])

    def to_records(self) -> list[ScoreRecord]:
        out = []
        for i in range(len(self)):
            out.append(ScoreRecord(self.word(i), int(self.cls[i]), int(self.length[i]), int(self.f[i]),
                                   float(self.E[i]), float(self.V[i]), float(self.z[i]),
                                   int(self.fstar[i]), int(self.bord[i])))
        return out


def analyze_fast(index: BwtIndex, model: MarkovModel, thresholds: Thresholds, economy: bool = False,
                 sample_every: int = 0) -> AnalysisResult:
    """Kernel counterpart of :func:`bwtwords.engine.analyze` (default score only).

    ``records`` is a :class:`KernelRecords` rather than a list.
    """
    if economy and thresholds.mode == "all":
        raise ValueError("storage economy cannot score every node; use over/under/both")
    th = thresholds
    out = run_kernel(
        index.ones, index.cfull, index.C.astype(np.int64), index.sigma, index.n, index.depth,
        np.asarray(model.P, dtype=np.float64), model.N,
        th.wants_over, th.wants_under, th.mode == "all",
        th.zmin is not None, float(th.zmin if th.zmin is not None else 0.0),
        th.zmax is not None, float(th.zmax if th.zmax is not None else 0.0),
        -1 if th.max_len is None else int(th.max_len), economy, int(sample_every),
    )
    (cls, length, f, E, V, z, fs, bord, off, codes, cnt, st, reads,
     s_node, s_depth, s_frames, s_bits) = out
    recs = KernelRecords(cls, length, f, E, V, z, fs, bord, off, codes)
    counters = Counters(unscored=int(cnt[0]), negative_variance=int(cnt[1]), pi_underflow=int(cnt[2]),
                        maws=int(cnt[3]), minimal_rare=int(cnt[4]), maximal_repeats=int(cnt[5]),
                        right_maximal=int(cnt[6]), br_pairs=int(cnt[7]), char_pushes=int(cnt[8]))
    stats = TraversalStats(nodes=int(st[0]), max_frames=int(st[1]), max_stack_bits=int(st[2]),
                           total_stack_bits=int(st[3]), left_extensions=int(st[4]), weiner_links=int(st[5]))
    stats.depth_reads = Counter({d: int(v) for d, v in enumerate(reads) if v})
    stats.samples = [{"node": int(a), "depth": int(b), "frames": int(c), "stack_bits": int(d)}
                     for a, b, c, d in zip(s_node, s_depth, s_frames, s_bits)]
    result = AnalysisResult(recs, stats, counters)
    check_bounds(result, index.n, index.sigma)
    return result
