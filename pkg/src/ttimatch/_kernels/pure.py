"""Pure-Python kernels: exact weighted matching, lattice shortest paths, cluster DFS.

These are the reference implementations; `ttimatch._kernels._core` provides
compiled equivalents with identical semantics (same tie-breaking, same
outputs). Selection happens in `ttimatch.kernels`.
"""
from __future__ import annotations

import heapq

INF = float("inf")

# ---------------------------------------------------------------------------
# Maximum-weight general matching (blossom, dense O(V^3)) and the
# minimum-weight perfect matching wrapper used by the decoders.
# ---------------------------------------------------------------------------


class _Blossom:
    """Dense primal-dual blossom algorithm for maximum weight matching.

    Vertices are 1..n; blossom nodes occupy n+1..2n. Edge weights must be
    nonnegative integers; weight 0 means "no edge". Works phase by phase,
    each phase either augments the matching or finishes.
    """

    def __init__(self, n, weights):
        self.n = n
        N = 2 * n + 1
        self.N = N
        # g[u][v] = (real_u, real_v, w)
        self.gu = [[0] * N for _ in range(N)]
        self.gv = [[0] * N for _ in range(N)]
        self.gw = [[0] * N for _ in range(N)]
        for u in range(1, n + 1):
            for v in range(1, n + 1):
                self.gu[u][v] = u
                self.gv[u][v] = v
                if u != v:
                    self.gw[u][v] = weights[u - 1][v - 1]
        self.lab = [0] * N
        self.match = [0] * N
        self.slack = [0] * N
        self.st = list(range(N))
        self.pa = [0] * N
        self.S = [-1] * N
        self.vis = [0] * N
        self.flower = [[] for _ in range(N)]
        self.flower_from = [[0] * (n + 1) for _ in range(N)]
        for u in range(1, n + 1):
            self.flower_from[u][u] = u
        self.n_x = n
        self.t = 0
        self.q = []

    def e_delta(self, u, v):
        return self.lab[self.gu[u][v]] + self.lab[self.gv[u][v]] - 2 * self.gw[u][v]

    def update_slack(self, u, x):
        if not self.slack[x] or self.e_delta(u, x) < self.e_delta(self.slack[x], x):
            self.slack[x] = u

    def set_slack(self, x):
        self.slack[x] = 0
        for u in range(1, self.n + 1):
            if self.gw[u][x] > 0 and self.st[u] != x and self.S[self.st[u]] == 0:
                self.update_slack(u, x)

    def q_push(self, x):
        if x <= self.n:
            self.q.append(x)
        else:
            for y in self.flower[x]:
                self.q_push(y)

    def set_st(self, x, b):
        self.st[x] = b
        if x > self.n:
            for y in self.flower[x]:
                self.set_st(y, b)

    def get_pr(self, b, xr):
        fl = self.flower[b]
        pr = fl.index(xr)
        if pr % 2 == 1:
            fl[1:] = fl[:0:-1]
            return len(fl) - pr
        return pr

    def set_match(self, u, v):
        self.match[u] = self.gv[u][v]
        if u <= self.n:
            return
        xr = self.flower_from[u][self.gu[u][v]]
        pr = self.get_pr(u, xr)
        fl = self.flower[u]
        for i in range(pr):
            self.set_match(fl[i], fl[i ^ 1])
        self.set_match(xr, v)
        self.flower[u] = fl[pr:] + fl[:pr]

    def augment(self, u, v):
        while True:
            xnv = self.st[self.match[u]]
            self.set_match(u, v)
            if not xnv:
                return
            self.set_match(xnv, self.st[self.pa[xnv]])
            u, v = self.st[self.pa[xnv]], xnv

    def get_lca(self, u, v):
        self.t += 1
        while u or v:
            if u:
                if self.vis[u] == self.t:
                    return u
                self.vis[u] = self.t
                u = self.st[self.match[u]]
                if u:
                    u = self.st[self.pa[u]]
            u, v = v, u
        return 0

    def add_blossom(self, u, lca, v):
        b = self.n + 1
        while b <= self.n_x and self.st[b]:
            b += 1
        if b > self.n_x:
            self.n_x += 1
        self.lab[b] = 0
        self.S[b] = 0
        self.match[b] = self.match[lca]
        self.slack[b] = 0  # slot may be reused; stale slack can point inside b
        fl = [lca]
        x = u
        while x != lca:
            fl.append(x)
            y = self.st[self.match[x]]
            fl.append(y)
            self.q_push(y)
            x = self.st[self.pa[y]]
        fl[1:] = fl[:0:-1]
        x = v
        while x != lca:
            fl.append(x)
            y = self.st[self.match[x]]
            fl.append(y)
            self.q_push(y)
            x = self.st[self.pa[y]]
        self.flower[b] = fl
        self.set_st(b, b)
        for x in range(1, self.n_x + 1):
            self.gw[b][x] = self.gw[x][b] = 0
        for x in range(1, self.n + 1):
            self.flower_from[b][x] = 0
        for xs in fl:
            for x in range(1, self.n_x + 1):
                if self.gw[b][x] == 0 or self.e_delta(xs, x) < self.e_delta(b, x):
                    self.gu[b][x] = self.gu[xs][x]
                    self.gv[b][x] = self.gv[xs][x]
                    self.gw[b][x] = self.gw[xs][x]
                    self.gu[x][b] = self.gu[x][xs]
                    self.gv[x][b] = self.gv[x][xs]
                    self.gw[x][b] = self.gw[x][xs]
            for x in range(1, self.n + 1):
                if self.flower_from[xs][x]:
                    self.flower_from[b][x] = xs
        # edges into b recorded against its members are now orphaned
        self.set_slack(b)

    def expand_blossom(self, b):
        for x in self.flower[b]:
            self.set_st(x, x)
        xr = self.flower_from[b][self.gu[b][self.pa[b]]]
        pr = self.get_pr(b, xr)
        fl = self.flower[b]
        for i in range(0, pr, 2):
            xs = fl[i]
            xns = fl[i + 1]
            self.pa[xs] = self.gu[xns][xs]
            self.S[xs] = 1
            self.S[xns] = 0
            self.slack[xs] = 0
            self.set_slack(xns)
            self.q_push(xns)
        self.S[xr] = 1
        self.pa[xr] = self.pa[b]
        for i in range(pr + 1, len(fl)):
            self.S[fl[i]] = -1
            self.set_slack(fl[i])
        self.st[b] = 0

    def on_found_edge(self, eu, ev):
        u = self.st[eu]
        v = self.st[ev]
        if self.S[v] == -1:
            self.pa[v] = eu
            self.S[v] = 1
            nu = self.st[self.match[v]]
            self.slack[v] = self.slack[nu] = 0
            self.S[nu] = 0
            self.q_push(nu)
        elif self.S[v] == 0:
            lca = self.get_lca(u, v)
            if not lca:
                self.augment(u, v)
                self.augment(v, u)
                return True
            self.add_blossom(u, lca, v)
        return False

    def phase(self):
        self.S[1:self.n_x + 1] = [-1] * self.n_x
        self.slack[1:self.n_x + 1] = [0] * self.n_x
        self.q = []
        for x in range(1, self.n_x + 1):
            if self.st[x] == x and not self.match[x]:
                self.pa[x] = 0
                self.S[x] = 0
                self.q_push(x)
        if not self.q:
            return False
        head = 0
        while True:
            while head < len(self.q):
                u = self.q[head]
                head += 1
                if self.S[self.st[u]] == 1:
                    continue
                for v in range(1, self.n + 1):
                    if self.gw[u][v] > 0 and self.st[u] != self.st[v]:
                        if self.e_delta(u, v) == 0:
                            if self.on_found_edge(u, v):
                                return True
                        else:
                            self.update_slack(u, self.st[v])
            d = INF
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b and self.S[b] == 1:
                    d = min(d, self.lab[b] // 2)
            for x in range(1, self.n_x + 1):
                if self.st[x] == x and self.slack[x] and self.st[self.slack[x]] != x:
                    if self.S[x] == -1:
                        d = min(d, self.e_delta(self.slack[x], x))
                    elif self.S[x] == 0:
                        d = min(d, self.e_delta(self.slack[x], x) // 2)
            for u in range(1, self.n + 1):
                su = self.S[self.st[u]]
                if su == 0:
                    if self.lab[u] <= d:
                        return False
                    self.lab[u] -= d
                elif su == 1:
                    self.lab[u] += d
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b:
                    if self.S[b] == 0:
                        self.lab[b] += 2 * d
                    elif self.S[b] == 1:
                        self.lab[b] -= 2 * d
            self.q = []
            head = 0
            for x in range(1, self.n_x + 1):
                if (
                    self.st[x] == x
                    and self.slack[x]
                    and self.st[self.slack[x]] != x
                    and self.e_delta(self.slack[x], x) == 0
                ):
                    if self.on_found_edge(self.slack[x], x):
                        return True
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b and self.S[b] == 1 and self.lab[b] == 0:
                    self.expand_blossom(b)

    def solve(self):
        w_max = 0
        for u in range(1, self.n + 1):
            for v in range(1, self.n + 1):
                w_max = max(w_max, self.gw[u][v])
        for u in range(1, self.n + 1):
            self.lab[u] = w_max
        while self.phase():
            pass
        return self.match[1:self.n + 1]


def max_weight_matching_dense(n, weights):
    """Maximum-weight matching on vertices 0..n-1.

    `weights` is a dense n x n symmetric list of nonnegative ints (0 = no
    edge). Returns mate array (mate[i] = j or -1).
    """
    if n == 0:
        return []
    match = _Blossom(n, weights).solve()
    return [m - 1 for m in match]


def min_weight_perfect_matching(n, weights):
    """Exact minimum-weight perfect matching on the complete graph K_n.

    `weights` is a dense symmetric n x n list of nonnegative ints; n must be
    even. Returns a list of (i, j) pairs, i < j, sorted.
    """
    if n % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if n == 0:
        return []
    if n == 2:
        return [(0, 1)]
    w_max = max(max(row) for row in weights)
    big = (n + 2) * (w_max + 1)
    flipped = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                flipped[i][j] = big - weights[i][j]
    mate = max_weight_matching_dense(n, flipped)
    pairs = sorted((i, j) for i, j in enumerate(mate) if 0 <= i < j)
    if len(pairs) != n // 2:
        raise AssertionError("matching on complete graph is not perfect")
    return pairs


# ---------------------------------------------------------------------------
# Shortest paths over the check lattice with move costs 1 + lambda * penalty.
# ---------------------------------------------------------------------------


def dijkstra_moves(ell, m, moves, lam_num, lam_den, bg, source, targets):
    """Single-source shortest paths over the l x m check lattice.

    moves: list of (dx, dy, odx, ody, has_other); a move from check (i, j)
    goes to ((i+dx) mod l, (j+dy) mod m) and, when has_other, additionally
    flips the check at ((i+odx) mod l, (j+ody) mod m). Cost per move is
    lam_den + lam_num * penalty, with penalty = 0 iff the move has an
    `other` check that lands on a background-violated check (bg[c] == 1),
    or has no other check at all.

    Ties in total cost are broken by fewer hops; remaining ties by the
    deterministic heap ordering (node index). Returns (dist, hops, par)
    arrays; par[v] is the move index taken into v (-1 at source/unreached).

    Stops early once all `targets` are settled.
    """
    n = ell * m
    key_shift = 1 << 20  # hops fit well below this
    dist = [-1] * n
    hops = [0] * n
    par = [-1] * n
    target_left = 0
    is_target = [0] * n
    for t in targets:
        if not is_target[t]:
            is_target[t] = 1
            target_left += 1
    heap = [(0, source)]
    best = [None] * n
    best[source] = 0
    while heap:
        key, u = heapq.heappop(heap)
        if best[u] != key:
            continue
        dist[u] = key >> 20
        hops[u] = key & (key_shift - 1)
        best[u] = -1  # settled
        if is_target[u]:
            target_left -= 1
            if target_left == 0:
                break
        ui, uj = u % ell, u // ell
        du = key >> 20
        hu = key & (key_shift - 1)
        for k, (dx, dy, odx, ody, has_other) in enumerate(moves):
            v = ((ui + dx) % ell) + ell * ((uj + dy) % m)
            if best[v] == -1:
                continue
            pen = 0
            if has_other:
                oc = ((ui + odx) % ell) + ell * ((uj + ody) % m)
                if not bg[oc]:
                    pen = 1
            nd = du + lam_den + lam_num * pen
            nk = (nd << 20) | (hu + 1)
            if best[v] is None or nk < best[v]:
                best[v] = nk
                par[v] = k
                heapq.heappush(heap, (nk, v))
    return dist, hops, par


# ---------------------------------------------------------------------------
# Depth-limited DFS over candidate error-cluster supports.
# ---------------------------------------------------------------------------


def dfs_cluster_search(
    qc_idx,
    qc_ptr,
    cq_idx,
    cq_ptr,
    s_obs_words,
    n_checks,
    c_a,
    c_b,
    w_fixed,
    node_budget=20000,
):
    """First error found whose syndrome covers {c_a, c_b} inside s_obs.

    Inputs are CSR adjacency arrays: qc_* maps qubit -> checks it flips
    (detecting-matrix column) and cq_* maps check -> qubits touching it;
    s_obs_words is a uint64 word bitmask over checks. Nodes are error
    supports; a node at depth t has c_a violated. Expansion resolves the
    lowest-index currently-violated check outside s_obs, branching over its
    touching qubits in ascending order (branching factor <= check weight,
    which keeps the worst case at 6^w_fixed for weight-6 columns). Success
    requires the syndrome to contain both endpoints, sit inside s_obs, and
    (for weights <= 6) contain no proper nonempty zero-syndrome sub-error.
    Returns a sorted qubit tuple or None.
    """
    if w_fixed <= 0:
        return None
    n_qubits = len(qc_ptr) - 1
    qubit_checks = [
        tuple(int(c) for c in qc_idx[qc_ptr[q]:qc_ptr[q + 1]]) for q in range(n_qubits)
    ]
    check_qubits = [
        tuple(int(q) for q in cq_idx[cq_ptr[c]:cq_ptr[c + 1]]) for c in range(n_checks)
    ]
    s_obs_mask = {
        c for c in range(n_checks) if (int(s_obs_words[c >> 6]) >> (c & 63)) & 1
    }
    visited = set()
    budget = [node_budget]

    def minimal(qubits):
        if len(qubits) > 6:
            return True
        qubits = tuple(qubits)
        for mask in range(1, (1 << len(qubits)) - 1):
            s = set()
            for i, q in enumerate(qubits):
                if (mask >> i) & 1:
                    s ^= set(qubit_checks[q])
            if not s:
                return False
        return True

    def rec(error, synd):
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        if c_a in synd and c_b in synd and synd <= s_obs_mask:
            if minimal(error):
                return tuple(sorted(error))
        if len(error) >= w_fixed:
            return None
        uncovered = synd - s_obs_mask
        if not uncovered:
            return None
        c_next = min(uncovered)
        cands = {q for q in check_qubits[c_next] if q not in error}
        for q in sorted(cands):
            new_synd = synd ^ set(qubit_checks[q])
            if c_a not in new_synd:
                continue
            key = tuple(sorted(error + (q,)))
            if key in visited:
                continue
            visited.add(key)
            got = rec(error + (q,), new_synd)
            if got is not None:
                return got
        return None

    # roots: single qubits touching c_a, ascending
    for q in sorted(check_qubits[c_a]):
        synd = set(qubit_checks[q])
        key = (q,)
        if key in visited:
            continue
        visited.add(key)
        got = rec((q,), synd)
        if got is not None:
            return got
        if budget[0] <= 0:
            return None
    return None
