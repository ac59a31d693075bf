# cython: language_level=3
"""Compiled kernels mirroring ttimatch._kernels.pure (same outputs, same ties)."""

import numpy as np
from libc.stdlib cimport malloc, free

ctypedef long long i64
ctypedef int i32


# ---------------------------------------------------------------------------
# Blossom maximum-weight matching (dense) + min-weight perfect wrapper.
# ---------------------------------------------------------------------------

cdef class _Blossom:
    cdef int n, N, n_x, t
    cdef i64[:, ::1] gw
    cdef i32[:, ::1] gu, gv, flower, flower_from
    cdef i64[::1] lab
    cdef i32[::1] match, slack, st, pa, S, vis, flen, q
    cdef int q_len

    def __init__(self, int n, i64[:, ::1] weights):
        cdef int u, v
        self.n = n
        self.N = 2 * n + 1
        self.n_x = n
        self.t = 0
        N = self.N
        self.gw = np.zeros((N, N), dtype=np.int64)
        self.gu = np.zeros((N, N), dtype=np.int32)
        self.gv = np.zeros((N, N), dtype=np.int32)
        self.flower = np.zeros((N, N), dtype=np.int32)
        self.flower_from = np.zeros((N, n + 1), dtype=np.int32)
        self.flen = np.zeros(N, dtype=np.int32)
        self.lab = np.zeros(N, dtype=np.int64)
        self.match = np.zeros(N, dtype=np.int32)
        self.slack = np.zeros(N, dtype=np.int32)
        self.st = np.arange(N, dtype=np.int32)
        self.pa = np.zeros(N, dtype=np.int32)
        self.S = np.full(N, -1, dtype=np.int32)
        self.vis = np.zeros(N, dtype=np.int32)
        self.q = np.zeros(N * 4, dtype=np.int32)
        self.q_len = 0
        for u in range(1, n + 1):
            for v in range(1, n + 1):
                self.gu[u, v] = u
                self.gv[u, v] = v
                if u != v:
                    self.gw[u, v] = weights[u - 1, v - 1]
            self.flower_from[u, u] = u

    cdef inline i64 e_delta(self, int u, int v):
        return self.lab[self.gu[u, v]] + self.lab[self.gv[u, v]] - 2 * self.gw[u, v]

    cdef inline void update_slack(self, int u, int x):
        if self.slack[x] == 0 or self.e_delta(u, x) < self.e_delta(self.slack[x], x):
            self.slack[x] = u

    cdef void set_slack(self, int x):
        cdef int u
        self.slack[x] = 0
        for u in range(1, self.n + 1):
            if self.gw[u, x] > 0 and self.st[u] != x and self.S[self.st[u]] == 0:
                self.update_slack(u, x)

    cdef void q_push(self, int x):
        cdef int i
        if x <= self.n:
            self.q[self.q_len] = x
            self.q_len += 1
        else:
            for i in range(self.flen[x]):
                self.q_push(self.flower[x, i])

    cdef void set_st(self, int x, int b):
        cdef int i
        self.st[x] = b
        if x > self.n:
            for i in range(self.flen[x]):
                self.set_st(self.flower[x, i], b)

    cdef int get_pr(self, int b, int xr):
        cdef int pr = 0, i, j, L = self.flen[b]
        cdef i32 tmp
        while self.flower[b, pr] != xr:
            pr += 1
        if pr % 2 == 1:
            # reverse flower[b][1:]
            i = 1
            j = L - 1
            while i < j:
                tmp = self.flower[b, i]
                self.flower[b, i] = self.flower[b, j]
                self.flower[b, j] = tmp
                i += 1
                j -= 1
            return L - pr
        return pr

    cdef void set_match(self, int u, int v):
        cdef int xr, pr, i, L
        cdef i32 *buf
        self.match[u] = self.gv[u, v]
        if u <= self.n:
            return
        xr = self.flower_from[u, self.gu[u, v]]
        pr = self.get_pr(u, xr)
        for i in range(pr):
            self.set_match(self.flower[u, i], self.flower[u, i ^ 1])
        self.set_match(xr, v)
        # rotate flower[u] left by pr
        L = self.flen[u]
        buf = <i32 *> malloc(L * sizeof(i32))
        for i in range(L):
            buf[i] = self.flower[u, (pr + i) % L]
        for i in range(L):
            self.flower[u, i] = buf[i]
        free(buf)

    cdef void augment(self, int u, int v):
        cdef int xnv
        while True:
            xnv = self.st[self.match[u]]
            self.set_match(u, v)
            if xnv == 0:
                return
            self.set_match(xnv, self.st[self.pa[xnv]])
            u = self.st[self.pa[xnv]]
            v = xnv

    cdef int get_lca(self, int u, int v):
        cdef int tmp
        self.t += 1
        while u != 0 or v != 0:
            if u != 0:
                if self.vis[u] == self.t:
                    return u
                self.vis[u] = self.t
                u = self.st[self.match[u]]
                if u != 0:
                    u = self.st[self.pa[u]]
            tmp = u
            u = v
            v = tmp
        return 0

    cdef void add_blossom(self, int u, int lca, int v):
        cdef int b = self.n + 1
        cdef int x, y, i, xs, L, half
        cdef i32 tmp
        while b <= self.n_x and self.st[b] != 0:
            b += 1
        if b > self.n_x:
            self.n_x += 1
        self.lab[b] = 0
        self.S[b] = 0
        self.match[b] = self.match[lca]
        self.slack[b] = 0  # slot may be reused; stale slack can point inside b
        self.flower[b, 0] = lca
        L = 1
        x = u
        while x != lca:
            self.flower[b, L] = x
            L += 1
            y = self.st[self.match[x]]
            self.flower[b, L] = y
            L += 1
            self.q_push(y)
            x = self.st[self.pa[y]]
        # reverse flower[b][1:L]
        i = 1
        half = L - 1
        while i < half:
            tmp = self.flower[b, i]
            self.flower[b, i] = self.flower[b, half]
            self.flower[b, half] = tmp
            i += 1
            half -= 1
        x = v
        while x != lca:
            self.flower[b, L] = x
            L += 1
            y = self.st[self.match[x]]
            self.flower[b, L] = y
            L += 1
            self.q_push(y)
            x = self.st[self.pa[y]]
        self.flen[b] = L
        self.set_st(b, b)
        for x in range(1, self.n_x + 1):
            self.gw[b, x] = 0
            self.gw[x, b] = 0
        for x in range(1, self.n + 1):
            self.flower_from[b, x] = 0
        for i in range(L):
            xs = self.flower[b, i]
            for x in range(1, self.n_x + 1):
                if self.gw[b, x] == 0 or self.e_delta(xs, x) < self.e_delta(b, x):
                    self.gu[b, x] = self.gu[xs, x]
                    self.gv[b, x] = self.gv[xs, x]
                    self.gw[b, x] = self.gw[xs, x]
                    self.gu[x, b] = self.gu[x, xs]
                    self.gv[x, b] = self.gv[x, xs]
                    self.gw[x, b] = self.gw[x, xs]
            for x in range(1, self.n + 1):
                if self.flower_from[xs, x] != 0:
                    self.flower_from[b, x] = xs
        # edges into b recorded against its members are now orphaned
        self.set_slack(b)

    cdef void expand_blossom(self, int b):
        cdef int i, xr, pr, xs, xns
        for i in range(self.flen[b]):
            self.set_st(self.flower[b, i], self.flower[b, i])
        xr = self.flower_from[b, self.gu[b, self.pa[b]]]
        pr = self.get_pr(b, xr)
        i = 0
        while i < pr:
            xs = self.flower[b, i]
            xns = self.flower[b, i + 1]
            self.pa[xs] = self.gu[xns, xs]
            self.S[xs] = 1
            self.S[xns] = 0
            self.slack[xs] = 0
            self.set_slack(xns)
            self.q_push(xns)
            i += 2
        self.S[xr] = 1
        self.pa[xr] = self.pa[b]
        for i in range(pr + 1, self.flen[b]):
            self.S[self.flower[b, i]] = -1
            self.set_slack(self.flower[b, i])
        self.st[b] = 0

    cdef bint on_found_edge(self, int eu, int ev):
        cdef int u = self.st[eu]
        cdef int v = self.st[ev]
        cdef int nu, lca
        if self.S[v] == -1:
            self.pa[v] = eu
            self.S[v] = 1
            nu = self.st[self.match[v]]
            self.slack[v] = 0
            self.slack[nu] = 0
            self.S[nu] = 0
            self.q_push(nu)
        elif self.S[v] == 0:
            lca = self.get_lca(u, v)
            if lca == 0:
                self.augment(u, v)
                self.augment(v, u)
                return True
            self.add_blossom(u, lca, v)
        return False

    cdef int phase(self):
        cdef int x, u, v, b, head
        cdef i64 d, cand
        cdef bint found
        for x in range(1, self.n_x + 1):
            self.S[x] = -1
            self.slack[x] = 0
        self.q_len = 0
        for x in range(1, self.n_x + 1):
            if self.st[x] == x and self.match[x] == 0:
                self.pa[x] = 0
                self.S[x] = 0
                self.q_push(x)
        if self.q_len == 0:
            return 0
        head = 0
        while True:
            while head < self.q_len:
                u = self.q[head]
                head += 1
                if self.S[self.st[u]] == 1:
                    continue
                for v in range(1, self.n + 1):
                    if self.gw[u, v] > 0 and self.st[u] != self.st[v]:
                        if self.e_delta(u, v) == 0:
                            if self.on_found_edge(u, v):
                                return 1
                        else:
                            self.update_slack(u, self.st[v])
            d = <i64> 1 << 62
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b and self.S[b] == 1:
                    cand = self.lab[b] // 2
                    if cand < d:
                        d = cand
            for x in range(1, self.n_x + 1):
                if self.st[x] == x and self.slack[x] != 0 and self.st[self.slack[x]] != x:
                    if self.S[x] == -1:
                        cand = self.e_delta(self.slack[x], x)
                        if cand < d:
                            d = cand
                    elif self.S[x] == 0:
                        cand = self.e_delta(self.slack[x], x) // 2
                        if cand < d:
                            d = cand
            for u in range(1, self.n + 1):
                if self.S[self.st[u]] == 0:
                    if self.lab[u] <= d:
                        return 0
                    self.lab[u] -= d
                elif self.S[self.st[u]] == 1:
                    self.lab[u] += d
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b:
                    if self.S[b] == 0:
                        self.lab[b] += 2 * d
                    elif self.S[b] == 1:
                        self.lab[b] -= 2 * d
            self.q_len = 0
            head = 0
            found = False
            for x in range(1, self.n_x + 1):
                if (self.st[x] == x and self.slack[x] != 0
                        and self.st[self.slack[x]] != x
                        and self.e_delta(self.slack[x], x) == 0):
                    if self.on_found_edge(self.slack[x], x):
                        return 1
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b and self.S[b] == 1 and self.lab[b] == 0:
                    self.expand_blossom(b)

    cdef list solve(self):
        cdef int u, v
        cdef i64 w_max = 0
        for u in range(1, self.n + 1):
            for v in range(1, self.n + 1):
                if self.gw[u, v] > w_max:
                    w_max = self.gw[u, v]
        for u in range(1, self.n + 1):
            self.lab[u] = w_max
        while self.phase():
            pass
        return [self.match[u] for u in range(1, self.n + 1)]


def max_weight_matching_dense(int n, weights):
    """Mirror of pure.max_weight_matching_dense (weights: n x n array-like)."""
    if n == 0:
        return []
    cdef i64[:, ::1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef _Blossom bl = _Blossom(n, w)
    match = bl.solve()
    return [mm - 1 for mm in match]


def min_weight_perfect_matching(int n, weights):
    """Mirror of pure.min_weight_perfect_matching."""
    if n % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if n == 0:
        return []
    if n == 2:
        return [(0, 1)]
    cdef i64[:, ::1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef i64 w_max = 0, big
    cdef int i, j
    for i in range(n):
        for j in range(n):
            if w[i, j] > w_max:
                w_max = w[i, j]
    big = (n + 2) * (w_max + 1)
    flipped = np.zeros((n, n), dtype=np.int64)
    cdef i64[:, ::1] f = flipped
    for i in range(n):
        for j in range(n):
            if i != j:
                f[i, j] = big - w[i, j]
    mate = max_weight_matching_dense(n, flipped)
    pairs = sorted((i, j) for i, j in enumerate(mate) if 0 <= i < j)
    if len(pairs) != n // 2:
        raise AssertionError("matching on complete graph is not perfect")
    return pairs


# ---------------------------------------------------------------------------
# Dijkstra over the check lattice with move costs lam_den + lam_num * penalty.
# ---------------------------------------------------------------------------

def dijkstra_moves(int ell, int m, moves, i64 lam_num, i64 lam_den, bg,
                   int source, targets):
    """Mirror of pure.dijkstra_moves; returns (dist, hops, par) lists."""
    cdef int n = ell * m
    cdef int n_moves = len(moves)
    cdef i32[:, ::1] mv = np.asarray(moves, dtype=np.int32).reshape(n_moves, 5)
    cdef unsigned char[::1] bgv = np.ascontiguousarray(bg, dtype=np.uint8)
    cdef i64[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef i32[::1] hops = np.zeros(n, dtype=np.int32)
    cdef i32[::1] par = np.full(n, -1, dtype=np.int32)
    cdef i64[::1] best = np.full(n, -2, dtype=np.int64)  # -2 unseen, -1 settled
    cdef unsigned char[::1] is_target = np.zeros(n, dtype=np.uint8)
    cdef int target_left = 0
    cdef int t
    for t in targets:
        if not is_target[t]:
            is_target[t] = 1
            target_left += 1
    # manual binary heap of packed keys: (key << 12) | node, node < 4096
    if n >= 4096:
        raise ValueError("lattice too large for packed heap keys")
    cdef i64 *heap = <i64 *> malloc((n * n_moves + 8) * sizeof(i64))
    cdef int heap_len = 0
    cdef i64 entry, nk, key, du
    cdef int u, v, k, ui, uj, hu, pen, oc, child, parent_i, pos

    # push source
    heap[0] = 0 << 12 | source
    heap_len = 1
    best[source] = 0

    while heap_len > 0:
        entry = heap[0]
        heap_len -= 1
        heap[0] = heap[heap_len]
        # sift down
        pos = 0
        while True:
            child = 2 * pos + 1
            if child >= heap_len:
                break
            if child + 1 < heap_len and heap[child + 1] < heap[child]:
                child += 1
            if heap[child] < heap[pos]:
                heap[pos], heap[child] = heap[child], heap[pos]
                pos = child
            else:
                break
        u = <int> (entry & 0xFFF)
        key = entry >> 12
        if best[u] != key:
            continue
        du = key >> 20
        hu = <int> (key & 0xFFFFF)
        dist[u] = du
        hops[u] = hu
        best[u] = -1
        if is_target[u]:
            target_left -= 1
            if target_left == 0:
                break
        ui = u % ell
        uj = u // ell
        for k in range(n_moves):
            v = ((ui + mv[k, 0]) % ell + ell) % ell + ell * (((uj + mv[k, 1]) % m + m) % m)
            if best[v] == -1:
                continue
            pen = 0
            if mv[k, 4] != 0:
                oc = ((ui + mv[k, 2]) % ell + ell) % ell + ell * (((uj + mv[k, 3]) % m + m) % m)
                if bgv[oc] == 0:
                    pen = 1
            nk = ((du + lam_den + lam_num * pen) << 20) | (hu + 1)
            if best[v] == -2 or nk < best[v]:
                best[v] = nk
                par[v] = k
                # push (nk << 12) | v
                entry = (nk << 12) | v
                heap[heap_len] = entry
                pos = heap_len
                heap_len += 1
                while pos > 0:
                    parent_i = (pos - 1) >> 1
                    if heap[parent_i] > heap[pos]:
                        heap[parent_i], heap[pos] = heap[pos], heap[parent_i]
                        pos = parent_i
                    else:
                        break
    free(heap)
    return list(dist), list(hops), list(par)


# ---------------------------------------------------------------------------
# Depth-limited DFS over candidate error-cluster supports.
# ---------------------------------------------------------------------------

cdef int MAX_DEPTH = 8
cdef int MAX_CAND = 256


cdef class _Visited:
    """Open-addressing set of packed (<=117 bit) sorted-qubit keys."""
    cdef i64 *lo
    cdef i64 *hi
    cdef unsigned char *used
    cdef i64 mask
    cdef i64 count
    cdef i64 cap

    def __cinit__(self, i64 expected):
        cdef i64 cap = 64
        while cap < 4 * (expected + 16):
            cap <<= 1
        self.cap = cap
        self.mask = cap - 1
        self.lo = <i64 *> malloc(cap * sizeof(i64))
        self.hi = <i64 *> malloc(cap * sizeof(i64))
        self.used = <unsigned char *> malloc(cap)
        cdef i64 i
        for i in range(cap):
            self.used[i] = 0
        self.count = 0

    def __dealloc__(self):
        if self.lo != NULL:
            free(self.lo)
        if self.hi != NULL:
            free(self.hi)
        if self.used != NULL:
            free(self.used)

    cdef bint add(self, i64 lo, i64 hi):
        """Insert; returns True if newly added, False if already present."""
        cdef unsigned long long h = (<unsigned long long> lo) * 0x9E3779B97F4A7C15ULL
        h ^= (<unsigned long long> hi) * 0xC2B2AE3D27D4EB4FULL
        h &= <unsigned long long> self.mask
        while self.used[h]:
            if self.lo[h] == lo and self.hi[h] == hi:
                return False
            h = (h + 1) & <unsigned long long> self.mask
        if self.count * 2 >= self.cap:
            # table over half full; budget should normally stop us first
            return False
        self.used[h] = 1
        self.lo[h] = lo
        self.hi[h] = hi
        self.count += 1
        return True


cdef inline void _pack_key(i32 *error, int depth, int extra_q, i64 *lo, i64 *hi):
    """Pack the sorted set {error[0..depth-1]} + optional extra (-1 = none)."""
    cdef i32 buf[16]
    cdef int L = 0, i, j
    cdef i32 v
    for i in range(depth):
        buf[L] = error[i]
        L += 1
    if extra_q >= 0:
        buf[L] = extra_q
        L += 1
    for i in range(1, L):
        v = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > v:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = v
    cdef i64 acc_lo = 0, acc_hi = 0
    cdef int k
    for k in range(L):
        if k < 4:
            acc_lo = acc_lo * 8192 + (buf[k] + 1)
        else:
            acc_hi = acc_hi * 8192 + (buf[k] + 1)
    lo[0] = acc_lo
    hi[0] = acc_hi


cdef inline void _xor_qubit(unsigned long long *synd, i32[::1] qci, i32[::1] qcp, int q):
    cdef int k, c
    for k in range(qcp[q], qcp[q + 1]):
        c = qci[k]
        synd[c >> 6] ^= (<unsigned long long> 1) << (c & 63)


cdef inline bint _bit(unsigned long long *words, int c):
    return (words[c >> 6] >> (c & 63)) & 1


cdef bint _minimal(unsigned long long *synd, unsigned long long *tmp,
                   i32[::1] qci, i32[::1] qcp, int n_words, i32 *error, int size):
    """No proper nonempty subset of the error has zero syndrome (size <= 6)."""
    cdef int mask, i, w
    cdef bint zero
    if size > 6:
        return True
    for mask in range(1, (1 << size) - 1):
        for w in range(n_words):
            tmp[w] = 0
        for i in range(size):
            if (mask >> i) & 1:
                _xor_qubit(tmp, qci, qcp, error[i])
        zero = True
        for w in range(n_words):
            if tmp[w]:
                zero = False
                break
        if zero:
            return False
    return True


cdef int _enter(unsigned long long *synd, unsigned long long *tmp,
                unsigned long long[::1] sobs,
                i32[::1] qci, i32[::1] qcp, i32[::1] cqi, i32[::1] cqp,
                int n_words, int n_checks, int c_a, int c_b, int w_fixed,
                i32 *error, int depth, i32 *cand, i32 *cand_len, i32 *cand_pos,
                i64 *budget):
    """Enter node at `depth` (error[0..depth] set, synd updated).

    Returns 1 success, 2 alive (candidates prepared), 0 dead-end, -1 abort.
    """
    cdef int i, w, c, k, q, L, j
    cdef i32 v
    cdef bint inside, ok
    if budget[0] <= 0:
        return -1
    budget[0] -= 1
    if _bit(synd, c_a) and _bit(synd, c_b):
        inside = True
        for w in range(n_words):
            if synd[w] & ~sobs[w]:
                inside = False
                break
        if inside and _minimal(synd, tmp, qci, qcp, n_words, error, depth + 1):
            return 1
    if depth + 1 >= w_fixed:
        return 0
    # resolve the lowest-index uncovered check; branch over its qubits
    L = 0
    for c in range(n_checks):
        if _bit(synd, c) and not ((sobs[c >> 6] >> (c & 63)) & 1):
            for k in range(cqp[c], cqp[c + 1]):
                q = cqi[k]
                ok = True
                for i in range(depth + 1):
                    if error[i] == q:
                        ok = False
                        break
                if ok and L < MAX_CAND:
                    cand[depth * MAX_CAND + L] = q
                    L += 1
            break
    if L == 0:
        return 0
    for i in range(1, L):
        v = cand[depth * MAX_CAND + i]
        j = i - 1
        while j >= 0 and cand[depth * MAX_CAND + j] > v:
            cand[depth * MAX_CAND + j + 1] = cand[depth * MAX_CAND + j]
            j -= 1
        cand[depth * MAX_CAND + j + 1] = v
    cand_len[depth] = L
    cand_pos[depth] = 0
    return 2


def dfs_cluster_search(qc_idx, qc_ptr, cq_idx, cq_ptr, s_obs_words,
                       int n_checks, int c_a, int c_b, int w_fixed,
                       i64 node_budget=20000):
    """Mirror of pure.dfs_cluster_search with CSR inputs.

    qc_*: qubit -> checks CSR; cq_*: check -> qubits CSR; s_obs_words:
    uint64 bitmask words over checks. Returns a sorted qubit tuple or None.
    """
    if w_fixed <= 0:
        return None
    if w_fixed > MAX_DEPTH:
        raise ValueError("w_fixed too large for compiled kernel")
    cdef i32[::1] qci = np.ascontiguousarray(qc_idx, dtype=np.int32)
    cdef i32[::1] qcp = np.ascontiguousarray(qc_ptr, dtype=np.int32)
    cdef i32[::1] cqi = np.ascontiguousarray(cq_idx, dtype=np.int32)
    cdef i32[::1] cqp = np.ascontiguousarray(cq_ptr, dtype=np.int32)
    cdef unsigned long long[::1] sobs = np.ascontiguousarray(s_obs_words, dtype=np.uint64)
    cdef int n_words = (n_checks + 63) >> 6
    cdef unsigned long long *synd = <unsigned long long *> malloc(n_words * sizeof(long long))
    cdef unsigned long long *tmp = <unsigned long long *> malloc(n_words * sizeof(long long))
    cdef i32 *cand = <i32 *> malloc(MAX_DEPTH * MAX_CAND * sizeof(i32))
    cdef i32 error[16]
    cdef i32 cand_len[16]
    cdef i32 cand_pos[16]
    cdef int i, q, st, depth
    cdef i64 budget = node_budget
    cdef i64 klo, khi
    cdef _Visited visited = _Visited(node_budget)
    for i in range(n_words):
        synd[i] = 0
    result = None
    try:
        roots = sorted(cqi[k] for k in range(cqp[c_a], cqp[c_a + 1]))
        for q in roots:
            _pack_key(error, 0, q, &klo, &khi)
            if not visited.add(klo, khi):
                continue
            _xor_qubit(synd, qci, qcp, q)
            error[0] = q
            st = _enter(synd, tmp, sobs, qci, qcp, cqi, cqp, n_words, n_checks,
                        c_a, c_b, w_fixed, error, 0, cand, cand_len, cand_pos,
                        &budget)
            if st == 1:
                result = (q,)
                return result
            if st == 2:
                result = _dfs_loop(synd, tmp, sobs, qci, qcp, cqi, cqp, n_words,
                                   n_checks, c_a, c_b, w_fixed, error, cand,
                                   cand_len, cand_pos, visited, &budget)
                if result is not None:
                    return result
                # _dfs_loop fully unwinds the syndrome including the root
            else:
                _xor_qubit(synd, qci, qcp, q)
            if st == -1:
                return None
            if budget <= 0:
                return None
        return None
    finally:
        free(synd)
        free(tmp)
        free(cand)


cdef object _dfs_loop(unsigned long long *synd, unsigned long long *tmp,
                      unsigned long long[::1] sobs,
                      i32[::1] qci, i32[::1] qcp, i32[::1] cqi, i32[::1] cqp,
                      int n_words, int n_checks, int c_a, int c_b, int w_fixed,
                      i32 *error, i32 *cand, i32 *cand_len, i32 *cand_pos,
                      _Visited visited, i64 *budget):
    cdef int depth = 0
    cdef int q, st, i
    cdef i64 klo, khi
    while depth >= 0:
        if cand_pos[depth] >= cand_len[depth]:
            _xor_qubit(synd, qci, qcp, error[depth])
            depth -= 1
            continue
        q = cand[depth * MAX_CAND + cand_pos[depth]]
        cand_pos[depth] += 1
        _xor_qubit(synd, qci, qcp, q)
        if not _bit(synd, c_a):
            _xor_qubit(synd, qci, qcp, q)
            continue
        _pack_key(error, depth + 1, q, &klo, &khi)
        if not visited.add(klo, khi):
            _xor_qubit(synd, qci, qcp, q)
            continue
        error[depth + 1] = q
        st = _enter(synd, tmp, sobs, qci, qcp, cqi, cqp, n_words, n_checks,
                    c_a, c_b, w_fixed, error, depth + 1, cand, cand_len,
                    cand_pos, budget)
        if st == 1:
            return tuple(sorted(error[i] for i in range(depth + 2)))
        if st == 2:
            depth += 1
        elif st == -1:
            # abort: unwind syndrome state before returning
            _xor_qubit(synd, qci, qcp, q)
            for i in range(depth, -1, -1):
                _xor_qubit(synd, qci, qcp, error[i])
            return None
        else:
            _xor_qubit(synd, qci, qcp, q)
    return None
