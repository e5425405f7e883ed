# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of ``ladderfilt._pykernels``; outputs are byte-identical."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

DEF MAXN = 64
DEF MAXDEG = 4
DEF MAXD = 256
DEF MAXE = 128
DEF MAXAUT = 64

ctypedef struct Ctx:
    int n
    int ne
    int nbr[MAXN * MAXDEG]
    int deg[MAXN]
    int oriented[MAXN]
    int vstart[MAXN + 1]
    int ea[MAXE]          # edge endpoints as vertices, edges in increasing smaller-dart order
    int eb[MAXE]
    int da[MAXE]          # darts of each edge
    int db[MAXE]
    int have_first
    int first[MAXE]
    int first_lab[MAXN]
    int first_sign
    int best[MAXE]
    int best_lab[MAXN]
    int best_sign
    int odd
    int nautos
    int autos[MAXAUT * MAXN]
    int leafcode[MAXE]
    int path[MAXN]


cdef int _cmp_sig(int* a, int* b) nogil:
    cdef int i
    for i in range(MAXDEG + 1):
        if a[i] != b[i]:
            return -1 if a[i] < b[i] else 1
    return 0


cdef void _refine(Ctx* c, int* col) nogil:
    cdef int n = c.n
    cdef int sig[MAXN * (MAXDEG + 1)]
    cdef int order[MAXN]
    cdef int newcol[MAXN]
    cdef int v, i, j, k, t, x, ncells, k2, start
    cdef int seen[MAXN]
    memset(seen, 0, sizeof(int) * MAXN)
    ncells = 0
    for v in range(n):
        if not seen[col[v]]:
            seen[col[v]] = 1
            ncells += 1
    while True:
        for v in range(n):
            sig[v * (MAXDEG + 1)] = col[v]
            k = c.deg[v]
            for i in range(MAXDEG):
                if i < k:
                    sig[v * (MAXDEG + 1) + 1 + i] = col[c.nbr[v * MAXDEG + i]]
                else:
                    sig[v * (MAXDEG + 1) + 1 + i] = -1
            # insertion sort of the first k neighbor colors
            for i in range(1, k):
                x = sig[v * (MAXDEG + 1) + 1 + i]
                j = i - 1
                while j >= 0 and sig[v * (MAXDEG + 1) + 1 + j] > x:
                    sig[v * (MAXDEG + 1) + 2 + j] = sig[v * (MAXDEG + 1) + 1 + j]
                    j -= 1
                sig[v * (MAXDEG + 1) + 2 + j] = x
        for v in range(n):
            order[v] = v
        for i in range(1, n):
            t = order[i]
            j = i - 1
            while j >= 0 and _cmp_sig(&sig[order[j] * (MAXDEG + 1)], &sig[t * (MAXDEG + 1)]) > 0:
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = t
        start = 0
        newcol[order[0]] = 0
        k2 = 1
        for i in range(1, n):
            if _cmp_sig(&sig[order[i] * (MAXDEG + 1)], &sig[order[i - 1] * (MAXDEG + 1)]) != 0:
                start = i
                k2 += 1
            newcol[order[i]] = start
        memcpy(col, newcol, sizeof(int) * n)
        if k2 == ncells:
            return
        ncells = k2


cdef void _leaf_code(Ctx* c, int* lab, int* out) nogil:
    cdef int i, j, x, a, b
    for i in range(c.ne):
        a = lab[c.ea[i]]
        b = lab[c.eb[i]]
        if a > b:
            a, b = b, a
        x = (a << 8) | b
        j = i - 1
        while j >= 0 and out[j] > x:
            out[j + 1] = out[j]
            j -= 1
        out[j + 1] = x


cdef int _leaf_sign(Ctx* c, int* lab) nogil:
    cdef int key[MAXD]
    cdef int pk[MAXE]
    cdef int i, j, r, la, lb, p, v, d0, k0, k1, k2, s
    for i in range(c.ne):
        la = lab[c.ea[i]]
        lb = lab[c.eb[i]]
        if la < lb:
            p = (la << 8) | lb
        else:
            p = (lb << 8) | la
        pk[i] = p
        r = 0
        for j in range(i):
            if pk[j] == p:
                r += 1
        key[c.da[i]] = (lb << 8) | r
        key[c.db[i]] = (la << 8) | r
    s = 1
    for v in range(c.n):
        if not c.oriented[v]:
            continue
        d0 = c.vstart[v]
        k0 = key[d0]
        k1 = key[d0 + 1]
        k2 = key[d0 + 2]
        if not ((k0 < k1 and k1 < k2) or (k1 < k2 and k2 < k0) or (k2 < k0 and k0 < k1)):
            s = -s
    return s


cdef int _cmp_code(int* a, int* b, int ne) nogil:
    cdef int i
    for i in range(ne):
        if a[i] != b[i]:
            return -1 if a[i] < b[i] else 1
    return 0


cdef void _record_auto(Ctx* c, int* ref_lab, int* lab) nogil:
    cdef int back[MAXN]
    cdef int w, v
    if c.nautos >= MAXAUT:
        return
    for w in range(c.n):
        back[ref_lab[w]] = w
    for v in range(c.n):
        c.autos[c.nautos * MAXN + v] = back[lab[v]]
    c.nautos += 1


cdef void _search(Ctx* c, int* col_in, int depth) nogil:
    cdef int n = c.n
    cdef int col[MAXN]
    cdef int c2[MAXN]
    cdef int cellsize[MAXN]
    cdef int cell[MAXN]
    cdef int done[MAXN]
    cdef int orb[MAXN]
    cdef int stack[MAXN]
    cdef int gens[MAXAUT]
    cdef int ngens, ndone, ncell, target, tsize, v, w, i, g, ok, s, cmpv, sp, x, y, k, hit
    memcpy(col, col_in, sizeof(int) * n)
    _refine(c, col)
    memset(cellsize, 0, sizeof(int) * n)
    for v in range(n):
        cellsize[col[v]] += 1
    target = -1
    tsize = n + 1
    for i in range(n):
        if cellsize[i] > 1 and cellsize[i] < tsize:
            target = i
            tsize = cellsize[i]
    if target < 0:
        _leaf_code(c, col, c.leafcode)
        s = _leaf_sign(c, col)
        if not c.have_first:
            c.have_first = 1
            memcpy(c.first, c.leafcode, sizeof(int) * c.ne)
            memcpy(c.first_lab, col, sizeof(int) * n)
            c.first_sign = s
            memcpy(c.best, c.leafcode, sizeof(int) * c.ne)
            memcpy(c.best_lab, col, sizeof(int) * n)
            c.best_sign = s
            return
        cmpv = _cmp_code(c.leafcode, c.first, c.ne)
        if cmpv == 0:
            if s != c.first_sign:
                c.odd = 1
            _record_auto(c, c.first_lab, col)
        k = _cmp_code(c.leafcode, c.best, c.ne)
        if k < 0:
            memcpy(c.best, c.leafcode, sizeof(int) * c.ne)
            memcpy(c.best_lab, col, sizeof(int) * n)
            c.best_sign = s
        elif k == 0 and cmpv != 0:
            if s != c.best_sign:
                c.odd = 1
            _record_auto(c, c.best_lab, col)
        return
    ncell = 0
    for v in range(n):
        if col[v] == target:
            cell[ncell] = v
            ncell += 1
    ndone = 0
    for i in range(ncell):
        v = cell[i]
        if ndone:
            ngens = 0
            for g in range(c.nautos):
                ok = 1
                for k in range(depth):
                    if c.autos[g * MAXN + c.path[k]] != c.path[k]:
                        ok = 0
                        break
                if ok:
                    gens[ngens] = g
                    ngens += 1
            if ngens:
                memset(orb, 0, sizeof(int) * n)
                orb[v] = 1
                stack[0] = v
                sp = 1
                while sp:
                    sp -= 1
                    x = stack[sp]
                    for g in range(ngens):
                        y = c.autos[gens[g] * MAXN + x]
                        if not orb[y]:
                            orb[y] = 1
                            stack[sp] = y
                            sp += 1
                hit = 0
                for k in range(ndone):
                    if orb[done[k]]:
                        hit = 1
                        break
                if hit:
                    continue
        memcpy(c2, col, sizeof(int) * n)
        for k in range(ncell):
            w = cell[k]
            if w != v:
                c2[w] = target + 1
        c.path[depth] = v
        _search(c, c2, depth + 1)
        done[ndone] = v
        ndone += 1


def canon_graph(colors, vstart, inv, oriented):
    cdef int n = len(colors)
    cdef int nd
    cdef int v, d, i, k, ne, start, a, b, va, vb
    cdef int dv[MAXD]
    cdef int col[MAXN]
    cdef int degenerate = 0
    cdef Ctx* c
    if n > MAXN:
        raise ValueError("graph too large for compiled canonizer (%d vertices)" % n)
    nd = vstart[n]
    if nd > MAXD:
        raise ValueError("graph too large for compiled canonizer (%d darts)" % nd)
    c = <Ctx*> malloc(sizeof(Ctx))
    if c == NULL:
        raise MemoryError()
    try:
        c.n = n
        for v in range(n + 1):
            c.vstart[v] = vstart[v]
        for v in range(n):
            c.oriented[v] = 1 if oriented[v] else 0
            c.deg[v] = c.vstart[v + 1] - c.vstart[v]
            if c.deg[v] > MAXDEG:
                raise ValueError("vertex degree above %d" % MAXDEG)
            for d in range(c.vstart[v], c.vstart[v + 1]):
                dv[d] = v
        for v in range(n):
            for i in range(c.deg[v]):
                c.nbr[v * MAXDEG + i] = dv[<int> inv[c.vstart[v] + i]]
        ne = 0
        for d in range(nd):
            k = inv[d]
            if d < k:
                c.da[ne] = d
                c.db[ne] = k
                c.ea[ne] = dv[d]
                c.eb[ne] = dv[k]
                ne += 1
        c.ne = ne
        # loops at oriented vertices, parallel edges with one oriented end
        for i in range(ne):
            va = c.ea[i]
            vb = c.eb[i]
            if va == vb:
                if c.oriented[va]:
                    degenerate = 1
                continue
            if c.oriented[va] != c.oriented[vb]:
                for k in range(i):
                    if (c.ea[k] == va and c.eb[k] == vb) or (c.ea[k] == vb and c.eb[k] == va):
                        degenerate = 1
        order = sorted(range(n), key=lambda x: colors[x])
        start = 0
        col[order[0]] = 0
        for i in range(1, n):
            if colors[order[i]] != colors[order[i - 1]]:
                start = i
            col[order[i]] = start
        c.have_first = 0
        c.odd = 0
        c.nautos = 0
        _search(c, col, 0)
        lab = [c.best_lab[v] for v in range(n)]
        ccol = [0] * n
        for v in range(n):
            ccol[c.best_lab[v]] = colors[v]
        out = bytearray([n])
        out.extend(ccol)
        for i in range(ne):
            out.append(c.best[i] >> 8)
            out.append(c.best[i] & 255)
        sign = 0 if (degenerate or c.odd) else c.best_sign
        return bytes(out), sign, lab
    finally:
        free(c)


# ---------------------------------------------------------------- 3-end blobs

cdef int _bridges(int n, int ne, int* ea, int* eb, int* adjv, int* adje, int* adjs,
                  int* banned, int* out) nogil:
    cdef int disc[MAXN]
    cdef int low[MAXN]
    cdef int st_v[MAXN]
    cdef int st_pe[MAXN]
    cdef int st_it[MAXN]
    cdef int t = 0, nb = 0, sp, root, x, pe, y, ei, px, adv
    for x in range(n):
        disc[x] = -1
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = t
        low[root] = t
        t += 1
        sp = 0
        st_v[0] = root
        st_pe[0] = -1
        st_it[0] = adjs[root]
        sp = 1
        while sp:
            x = st_v[sp - 1]
            pe = st_pe[sp - 1]
            adv = 0
            while st_it[sp - 1] < adjs[x + 1]:
                y = adjv[st_it[sp - 1]]
                ei = adje[st_it[sp - 1]]
                st_it[sp - 1] += 1
                if banned[ei] or ei == pe:
                    continue
                if disc[y] < 0:
                    disc[y] = t
                    low[y] = t
                    t += 1
                    st_v[sp] = y
                    st_pe[sp] = ei
                    st_it[sp] = adjs[y]
                    sp += 1
                    adv = 1
                    break
                if disc[y] < low[x]:
                    low[x] = disc[y]
            if adv:
                continue
            sp -= 1
            if sp:
                px = st_v[sp - 1]
                if low[x] < low[px]:
                    low[px] = low[x]
                if low[x] > disc[px]:
                    out[nb] = pe
                    nb += 1
    return nb


cdef int _side(int start, int n, int* adjv, int* adje, int* adjs, int* banned, int* inside) nogil:
    cdef int stack[MAXN]
    cdef int sp = 1, x, y, i, cnt = 1
    memset(inside, 0, sizeof(int) * n)
    inside[start] = 1
    stack[0] = start
    while sp:
        sp -= 1
        x = stack[sp]
        for i in range(adjs[x], adjs[x + 1]):
            if banned[adje[i]]:
                continue
            y = adjv[i]
            if not inside[y]:
                inside[y] = 1
                cnt += 1
                stack[sp] = y
                sp += 1
    return cnt


def has_three_end_blob(vstart, inv, trivalent):
    cdef int n = len(vstart) - 1
    cdef int nd = vstart[n]
    cdef int dv[MAXD]
    cdef int ea[MAXE]
    cdef int eb[MAXE]
    cdef int adjv[2 * MAXE]
    cdef int adje[2 * MAXE]
    cdef int adjs[MAXN + 1]
    cdef int fill[MAXN]
    cdef int tri[MAXN]
    cdef int banned[MAXE]
    cdef int br[MAXE]
    cdef int inside[MAXN]
    cdef int ne = 0, v, d, k, i, j, q, nb, s0, side_n, x, ok, e, which
    if n > MAXN or nd > MAXD:
        raise ValueError("graph too large")
    for v in range(n):
        tri[v] = 1 if trivalent[v] else 0
        for d in range(vstart[v], vstart[v + 1]):
            dv[d] = v
    for d in range(nd):
        k = inv[d]
        if d < k:
            ea[ne] = dv[d]
            eb[ne] = dv[k]
            ne += 1
    memset(adjs, 0, sizeof(int) * (MAXN + 1))
    for i in range(ne):
        adjs[ea[i] + 1] += 1
        adjs[eb[i] + 1] += 1
    for v in range(n):
        adjs[v + 1] += adjs[v]
    for v in range(n):
        fill[v] = adjs[v]
    for i in range(ne):
        adjv[fill[ea[i]]] = eb[i]
        adje[fill[ea[i]]] = i
        fill[ea[i]] += 1
        adjv[fill[eb[i]]] = ea[i]
        adje[fill[eb[i]]] = i
        fill[eb[i]] += 1
    memset(banned, 0, sizeof(int) * MAXE)
    for i in range(ne):
        for j in range(i + 1, ne):
            banned[i] = 1
            banned[j] = 1
            nb = _bridges(n, ne, ea, eb, adjv, adje, adjs, banned, br)
            for q in range(nb):
                banned[br[q]] = 1
                for which in range(2):
                    s0 = ea[br[q]] if which == 0 else eb[br[q]]
                    side_n = _side(s0, n, adjv, adje, adjs, banned, inside)
                    if side_n < 3:
                        continue
                    ok = 1
                    for x in range(n):
                        if inside[x] and not tri[x]:
                            ok = 0
                            break
                    if ok:
                        for e in (i, j):
                            if inside[ea[e]] == inside[eb[e]]:
                                ok = 0
                    if ok:
                        return True
                banned[br[q]] = 0
            banned[i] = 0
            banned[j] = 0
    return False


# ---------------------------------------------------------------- mod-p echelon

def echelon_modp(rows, int ncols, long long p):
    """Leftmost-pivot echelon modulo ``p``; returns the sorted pivot columns."""
    cdef long long* dense = <long long*> malloc(sizeof(long long) * (ncols + 1))
    cdef char* mark = <char*> malloc(ncols + 1)
    cdef int* heap = NULL
    cdef int heapcap = 1024, hn, c, k, i, cc, child, parent, tmp
    cdef long long x, w, inv_, y
    if dense == NULL or mark == NULL:
        raise MemoryError()
    heap = <int*> malloc(sizeof(int) * heapcap)
    memset(dense, 0, sizeof(long long) * (ncols + 1))
    memset(mark, 0, ncols + 1)
    pivot_cols = {}
    try:
        for cols, vals in rows:
            hn = 0
            for i in range(len(cols)):
                c = cols[i]
                x = (<long long> vals[i]) % p
                if x < 0:
                    x += p
                if x == 0:
                    continue
                dense[c] = (dense[c] + x) % p
                if not mark[c]:
                    mark[c] = 1
                    if hn == heapcap:
                        heapcap *= 2
                        heap = <int*> realloc_int(heap, heapcap)
                    # sift up
                    k = hn
                    hn += 1
                    while k > 0:
                        parent = (k - 1) >> 1
                        if heap[parent] <= c:
                            break
                        heap[k] = heap[parent]
                        k = parent
                    heap[k] = c
            while hn:
                c = heap[0]
                hn -= 1
                tmp = heap[hn]
                k = 0
                while True:
                    child = 2 * k + 1
                    if child >= hn:
                        break
                    if child + 1 < hn and heap[child + 1] < heap[child]:
                        child += 1
                    if heap[child] >= tmp:
                        break
                    heap[k] = heap[child]
                    k = child
                if hn:
                    heap[k] = tmp
                mark[c] = 0
                x = dense[c]
                if x == 0:
                    continue
                prow = pivot_cols.get(c)
                if prow is None:
                    # new pivot: gather c and everything still in the heap
                    inv_ = _powmod(x, p - 2, p)
                    pc = [c]
                    pv = [1]
                    dense[c] = 0
                    rest = []
                    for i in range(hn):
                        cc = heap[i]
                        mark[cc] = 0
                        if dense[cc]:
                            rest.append(cc)
                    rest.sort()
                    for cc in rest:
                        pc.append(cc)
                        pv.append((dense[cc] * inv_) % p)
                        dense[cc] = 0
                    hn = 0
                    pivot_cols[c] = (pc, pv)
                    break
                pc, pv = prow
                dense[c] = 0
                for i in range(1, len(pc)):
                    cc = pc[i]
                    w = pv[i]
                    y = (dense[cc] - x * w) % p
                    if y < 0:
                        y += p
                    dense[cc] = y
                    if not mark[cc]:
                        mark[cc] = 1
                        if hn == heapcap:
                            heapcap *= 2
                            heap = <int*> realloc_int(heap, heapcap)
                        k = hn
                        hn += 1
                        while k > 0:
                            parent = (k - 1) >> 1
                            if heap[parent] <= cc:
                                break
                            heap[k] = heap[parent]
                            k = parent
                        heap[k] = cc
            # clear leftovers when the row reduced to zero
            for i in range(hn):
                mark[heap[i]] = 0
                dense[heap[i]] = 0
        return sorted(pivot_cols)
    finally:
        free(dense)
        free(mark)
        free(heap)


cdef extern from "stdlib.h":
    void* realloc(void* ptr, size_t size)

cdef int* realloc_int(int* ptr, int n):
    cdef int* q = <int*> realloc(ptr, sizeof(int) * n)
    if q == NULL:
        raise MemoryError()
    return q


cdef long long _powmod(long long b, long long e, long long m):
    cdef long long r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = (r * b) % m
        b = (b * b) % m
        e >>= 1
    return r


# ---------------------------------------------------------------- ribbon faces

def face_counts(int nv, vstart, inv, flips, twists):
    cdef int nd = vstart[nv]
    cdef int succ[MAXD]
    cdef int pred[MAXD]
    cdef int tw[MAXD]
    cdef int invd[MAXD]
    cdef char seen[2 * MAXD]
    cdef int v, a, b, k, i, d, e, s, idx, d0, s0, orbits
    if nd > MAXD:
        raise ValueError("graph too large")
    for d in range(nd):
        invd[d] = inv[d]
    for v in range(nv):
        a = vstart[v]
        b = vstart[v + 1]
        k = b - a
        for i in range(k):
            d = a + i
            e = a + (i + 1) % k
            if flips[v]:
                d, e = e, d
            succ[d] = e
            pred[e] = d
    idx = 0
    for d in range(nd):
        if d < invd[d]:
            tw[d] = 1 if twists[idx] else 0
            tw[invd[d]] = tw[d]
            idx += 1
    memset(seen, 0, 2 * nd)
    orbits = 0
    for d0 in range(nd):
        for s0 in range(2):
            if seen[2 * d0 + s0]:
                continue
            orbits += 1
            d = d0
            s = s0
            while not seen[2 * d + s]:
                seen[2 * d + s] = 1
                e = invd[d]
                if tw[d]:
                    s ^= 1
                d = succ[e] if s == 0 else pred[e]
    return orbits // 2


# ---------------------------------------------------------------- blob masks

def blob_masks(vstart, inv, trivalent):
    cdef int n = len(vstart) - 1
    cdef int nd = vstart[n]
    cdef int dv[MAXD]
    cdef int ea[MAXE]
    cdef int eb[MAXE]
    cdef int adjv[2 * MAXE]
    cdef int adje[2 * MAXE]
    cdef int adjs[MAXN + 1]
    cdef int fill[MAXN]
    cdef int tri[MAXN]
    cdef int banned[MAXE]
    cdef int seen[MAXN]
    cdef int stack[MAXN]
    cdef int ne = 0, v, d, k, i, j, e, sp, x, y, q, cnt, ok, which, s0
    if n > MAXN or nd > MAXD:
        raise ValueError("graph too large")
    for v in range(n):
        tri[v] = 1 if trivalent[v] else 0
        for d in range(vstart[v], vstart[v + 1]):
            dv[d] = v
    for d in range(nd):
        k = inv[d]
        if d < k:
            ea[ne] = dv[d]
            eb[ne] = dv[k]
            ne += 1
    memset(adjs, 0, sizeof(int) * (MAXN + 1))
    for i in range(ne):
        adjs[ea[i] + 1] += 1
        adjs[eb[i] + 1] += 1
    for v in range(n):
        adjs[v + 1] += adjs[v]
    for v in range(n):
        fill[v] = adjs[v]
    for i in range(ne):
        adjv[fill[ea[i]]] = eb[i]
        adje[fill[ea[i]]] = i
        fill[ea[i]] += 1
        adjv[fill[eb[i]]] = ea[i]
        adje[fill[eb[i]]] = i
        fill[eb[i]] += 1
    memset(banned, 0, sizeof(int) * MAXE)
    masks = set()
    for i in range(ne):
        for j in range(i + 1, ne):
            for k in range(ne):
                if k == i or k == j:
                    continue
                banned[i] = 1
                banned[j] = 1
                banned[k] = 1
                for which in range(2):
                    s0 = ea[k] if which == 0 else eb[k]
                    memset(seen, 0, sizeof(int) * n)
                    seen[s0] = 1
                    stack[0] = s0
                    sp = 1
                    cnt = 1
                    while sp:
                        sp -= 1
                        x = stack[sp]
                        for q in range(adjs[x], adjs[x + 1]):
                            if banned[adje[q]]:
                                continue
                            y = adjv[q]
                            if not seen[y]:
                                seen[y] = 1
                                cnt += 1
                                stack[sp] = y
                                sp += 1
                    if cnt < 3 or cnt == n:
                        continue
                    ok = 1
                    for x in range(n):
                        if seen[x] and not tri[x]:
                            ok = 0
                            break
                    if ok:
                        for e in (i, j, k):
                            if seen[ea[e]] == seen[eb[e]]:
                                ok = 0
                    if not ok:
                        continue
                    mask = 0
                    for e in range(ne):
                        if seen[ea[e]] and seen[eb[e]]:
                            mask |= (<object> 1) << e
                    masks.add(mask)
                banned[i] = 0
                banned[j] = 0
                banned[k] = 0
    minimal = [x for x in masks if not any(y != x and y & x == y for y in masks)]
    return sorted(minimal)
