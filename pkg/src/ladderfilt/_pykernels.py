"""Pure-Python reference implementation of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` that must return
byte-identical results; ``ladderfilt._kernels`` picks one at import time.

Graph input convention shared by all graph kernels: vertex ``v`` owns the
darts ``vstart[v] .. vstart[v+1]-1`` (in rotation order when the vertex is
oriented) and ``inv`` is the fixed-point-free dart involution.
"""

MAX_AUTOS = 64


def _dart_vertex(vstart):
    nv = len(vstart) - 1
    out = [0] * vstart[nv]
    for v in range(nv):
        for d in range(vstart[v], vstart[v + 1]):
            out[d] = v
    return out


def _refine(col, nbrs, n):
    ncells = len(set(col))
    while True:
        sig = [(col[v], tuple(sorted([col[w] for w in nbrs[v]]))) for v in range(n)]
        order = sorted(range(n), key=sig.__getitem__)
        new = [0] * n
        start = 0
        for i in range(1, n):
            if sig[order[i]] != sig[order[i - 1]]:
                start = i
            new[order[i]] = start
        k = len(set(new))
        if k == ncells:
            return new
        col, ncells = new, k


def canon_graph(colors, vstart, inv, oriented):
    """Canonical labeling of a colored multigraph with rotation data.

    Returns ``(code, sign, labels)``. ``code`` is a ``bytes`` object that is
    equal for two inputs iff they are isomorphic as colored multigraphs.
    ``sign`` is the orientation parity of the input relative to the canonical
    representative (product over oriented vertices), or 0 when some
    automorphism reverses an odd number of oriented vertices.
    """
    n = len(colors)
    nd = vstart[n]
    vd = _dart_vertex(vstart)
    nbrs = [[vd[inv[d]] for d in range(vstart[v], vstart[v + 1])] for v in range(n)]
    edges = [(d, inv[d]) for d in range(nd) if d < inv[d]]

    degenerate = False
    for v in range(n):
        if oriented[v] and v in nbrs[v]:
            degenerate = True
    if not degenerate:
        seen = set()
        for a, b in edges:
            va, vb = vd[a], vd[b]
            if va == vb:
                continue
            key = (min(va, vb), max(va, vb))
            if key in seen and oriented[va] != oriented[vb]:
                degenerate = True
            seen.add(key)

    # initial partition ordered by color value
    srt = sorted(range(n), key=lambda v: colors[v])
    col = [0] * n
    start = 0
    for i in range(1, n):
        if colors[srt[i]] != colors[srt[i - 1]]:
            start = i
        col[srt[i]] = start

    sorted_edges = sorted(edges)

    def leaf_code(lab):
        return sorted((min(lab[vd[a]], lab[vd[b]]) << 8) | max(lab[vd[a]], lab[vd[b]])
                      for a, b in edges)

    def leaf_sign(lab):
        key = [0] * nd
        cnt = {}
        for a, b in sorted_edges:
            la, lb = lab[vd[a]], lab[vd[b]]
            p = (min(la, lb), max(la, lb))
            r = cnt.get(p, 0)
            cnt[p] = r + 1
            key[a] = (lb << 8) | r
            key[b] = (la << 8) | r
        s = 1
        for v in range(n):
            if not oriented[v]:
                continue
            d0 = vstart[v]
            k0, k1, k2 = key[d0], key[d0 + 1], key[d0 + 2]
            if not ((k0 < k1 < k2) or (k1 < k2 < k0) or (k2 < k0 < k1)):
                s = -s
        return s

    st = {"first": None, "first_lab": None, "first_sign": 0,
          "best": None, "best_lab": None, "best_sign": 0, "odd": False}
    autos = []

    def record_auto(ref_lab, lab):
        if len(autos) >= MAX_AUTOS:
            return
        back = [0] * n
        for w in range(n):
            back[ref_lab[w]] = w
        autos.append([back[lab[v]] for v in range(n)])

    def search(col, path):
        col = _refine(col, nbrs, n)
        cellsize = [0] * n
        for v in range(n):
            cellsize[col[v]] += 1
        target = -1
        tsize = n + 1
        for c in range(n):
            if 1 < cellsize[c] < tsize:
                target, tsize = c, cellsize[c]
        if target < 0:
            code = leaf_code(col)
            s = leaf_sign(col)
            if st["first"] is None:
                st["first"], st["first_lab"], st["first_sign"] = code, col, s
                st["best"], st["best_lab"], st["best_sign"] = code, col, s
                return
            if code == st["first"]:
                if s != st["first_sign"]:
                    st["odd"] = True
                record_auto(st["first_lab"], col)
            if code < st["best"]:
                st["best"], st["best_lab"], st["best_sign"] = code, col, s
            elif code == st["best"] and code != st["first"]:
                if s != st["best_sign"]:
                    st["odd"] = True
                record_auto(st["best_lab"], col)
            return
        cell = [v for v in range(n) if col[v] == target]
        done = []
        for v in cell:
            if done:
                gens = [g for g in autos if all(g[p] == p for p in path)]
                if gens:
                    orb = {v}
                    stack = [v]
                    while stack:
                        x = stack.pop()
                        for g in gens:
                            y = g[x]
                            if y not in orb:
                                orb.add(y)
                                stack.append(y)
                    if any(w in orb for w in done):
                        continue
            c2 = list(col)
            for w in cell:
                if w != v:
                    c2[w] = target + 1
            search(c2, path + [v])
            done.append(v)

    search(col, [])
    lab = st["best_lab"]
    ccol = [0] * n
    for v in range(n):
        ccol[lab[v]] = colors[v]
    out = bytearray([n])
    out.extend(ccol)
    for e in st["best"]:
        out.append(e >> 8)
        out.append(e & 255)
    sign = 0 if (degenerate or st["odd"]) else st["best_sign"]
    return bytes(out), sign, lab


def has_three_end_blob(vstart, inv, trivalent):
    """True iff some connected set H of trivalent vertices, |H| >= 3, has
    exactly three boundary edges.

    ``trivalent[v]`` marks the vertices allowed inside H.
    """
    n = len(vstart) - 1
    vd = _dart_vertex(vstart)
    edges = [(vd[d], vd[inv[d]]) for d in range(vstart[n]) if d < inv[d]]
    ne = len(edges)
    adj = [[] for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))

    def side_of(start, banned):
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y, ei in adj[x]:
                if ei in banned or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        return seen

    def bridges(banned):
        # Tarjan lowlink on the multigraph minus the banned edges.
        disc = [-1] * n
        low = [0] * n
        out = []
        t = 0
        for root in range(n):
            if disc[root] >= 0:
                continue
            disc[root] = low[root] = t
            t += 1
            stack = [(root, -1, iter(adj[root]))]
            while stack:
                x, pe, it = stack[-1]
                advanced = False
                for y, ei in it:
                    if ei in banned or ei == pe:
                        continue
                    if disc[y] < 0:
                        disc[y] = low[y] = t
                        t += 1
                        stack.append((y, ei, iter(adj[y])))
                        advanced = True
                        break
                    low[x] = min(low[x], disc[y])
                if advanced:
                    continue
                stack.pop()
                if stack:
                    px = stack[-1][0]
                    low[px] = min(low[px], low[x])
                    if low[x] > disc[px]:
                        out.append(pe)
        return out

    for i in range(ne):
        for j in range(i + 1, ne):
            banned = {i, j}
            for k in bridges(banned):
                a, b = edges[k]
                for s0 in (a, b):
                    side = side_of(s0, banned | {k})
                    if len(side) < 3 or not all(trivalent[x] for x in side):
                        continue
                    ok = True
                    for e in (i, j):
                        ea, eb = edges[e]
                        if (ea in side) == (eb in side):
                            ok = False
                    if ok:
                        return True
    return False


def echelon_modp(rows, ncols, p):
    """Leftmost-pivot row echelon form modulo the prime ``p``.

    ``rows`` is an iterable of ``(cols, vals)`` pairs with strictly
    increasing column indices. Returns the sorted list of pivot columns.
    """
    pivots = {}
    for cols, vals in rows:
        r = {}
        for c, x in zip(cols, vals):
            x %= p
            if x:
                r[c] = x
        while r:
            c = min(r)
            x = r[c]
            prow = pivots.get(c)
            if prow is None:
                inv = pow(x, p - 2, p)
                pivots[c] = {k: (w * inv) % p for k, w in r.items()}
                break
            for k, w in prow.items():
                y = (r.get(k, 0) - x * w) % p
                if y:
                    r[k] = y
                else:
                    r.pop(k, None)
    return sorted(pivots)


def face_counts(nv, vstart, inv, flips, twists):
    """Boundary-component count of a ribbon graph.

    ``flips[v]`` reverses the rotation at vertex ``v``; ``twists[e]`` marks a
    half-twisted edge, edges being indexed by their smaller dart in increasing
    order.
    """
    nd = vstart[nv]
    succ = [0] * nd
    pred = [0] * nd
    for v in range(nv):
        a, b = vstart[v], vstart[v + 1]
        k = b - a
        for i in range(k):
            d, e = a + i, a + (i + 1) % k
            if flips[v]:
                d, e = e, d
            succ[d] = e
            pred[e] = d
    tw = [0] * nd
    idx = 0
    for d in range(nd):
        if d < inv[d]:
            tw[d] = tw[inv[d]] = twists[idx]
            idx += 1
    seen = [[False, False] for _ in range(nd)]
    orbits = 0
    for d0 in range(nd):
        for s0 in (0, 1):
            if seen[d0][s0]:
                continue
            orbits += 1
            d, s = d0, s0
            while not seen[d][s]:
                seen[d][s] = True
                e = inv[d]
                if tw[d]:
                    s ^= 1
                d = succ[e] if s == 0 else pred[e]
    return orbits // 2


def blob_masks(vstart, inv, trivalent):
    """Minimal internal-edge bitmasks of all three-end blobs.

    Edge ``i`` is the i-th edge in increasing smaller-dart order.  A leg
    subdividing some edge of each mask is necessary for a placement to be
    blob-free.  Returns a sorted list of ints.
    """
    n = len(vstart) - 1
    vd = _dart_vertex(vstart)
    edges = [(vd[d], vd[inv[d]]) for d in range(vstart[n]) if d < inv[d]]
    ne = len(edges)
    adj = [[] for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    masks = set()
    for i in range(ne):
        for j in range(i + 1, ne):
            for k in range(ne):
                if k in (i, j):
                    continue
                banned = {i, j, k}
                for s0 in edges[k]:
                    seen = {s0}
                    stack = [s0]
                    while stack:
                        x = stack.pop()
                        for y, ei in adj[x]:
                            if ei not in banned and y not in seen:
                                seen.add(y)
                                stack.append(y)
                    if len(seen) < 3 or len(seen) == n or not all(trivalent[x] for x in seen):
                        continue
                    ok = True
                    for e in (i, j, k):
                        a, b = edges[e]
                        if (a in seen) == (b in seen):
                            ok = False
                    if not ok:
                        continue
                    mask = 0
                    for e, (a, b) in enumerate(edges):
                        if a in seen and b in seen:
                            mask |= 1 << e
                    masks.add(mask)
    minimal = [x for x in masks if not any(y != x and y & x == y for y in masks)]
    return sorted(minimal)
