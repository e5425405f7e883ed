"""Brute-force reference implementations, independent of the package code.

They are slow and only meant for tiny instances.
"""
from fractions import Fraction
from itertools import permutations, product


# ---------------------------------------------------------------- enumeration

def _multigraphs(degrees):
    """Symmetric multiplicity matrices with the given degrees (a loop counts 2)."""
    n = len(degrees)
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    A = [[0] * n for _ in range(n)]
    rest = list(degrees)

    def rec(k):
        if k == len(cells):
            yield [row[:] for row in A]
            return
        i, j = cells[k]
        top = rest[i] // 2 if i == j else min(rest[i], rest[j])
        for c in range(top + 1):
            A[i][j] = A[j][i] = c
            used = 2 * c if i == j else c
            rest[i] -= used
            if i != j:
                rest[j] -= c
            # row i is complete after its last cell
            if j < n - 1 or rest[i] == 0:
                yield from rec(k + 1)
            rest[i] += used
            if i != j:
                rest[j] += c
        A[i][j] = A[j][i] = 0

    yield from rec(0)


def _connected(A):
    n = len(A)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in range(n):
            if A[v][w] and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _canon(A, n3):
    n = len(A)
    best = None
    for pt in permutations(range(n3)):
        for pl in permutations(range(n3, n)):
            p = pt + pl
            key = tuple(A[p[i]][p[j]] for i in range(n) for j in range(n))
            if best is None or key < best:
                best = key
    return best


def _darts(A, n3):
    """Fixed dart layout: per vertex the list of (edge id, end) it carries."""
    n = len(A)
    at = [[] for _ in range(n)]
    edges = []
    for i in range(n):
        for j in range(i, n):
            for k in range(A[i][j]):
                e = len(edges)
                edges.append((i, j))
                at[i].append((e, 0))
                at[j].append((e, 1))
    return at, edges


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def _has_odd_automorphism(A, n3):
    n = len(A)
    at, edges = _darts(A, n3)
    for pt in permutations(range(n3)):
        for pl in permutations(range(n3, n)):
            pi = pt + pl
            if any(A[i][j] != A[pi[i]][pi[j]] for i in range(n) for j in range(n)):
                continue
            # edge bijection: permute parallel edges within each class; flip loops
            classes = {}
            for e, (i, j) in enumerate(edges):
                classes.setdefault((i, j), []).append(e)
            keys = sorted(classes)
            choices = []
            for key in keys:
                src = classes[key]
                i, j = key
                a, b = sorted((pi[i], pi[j]))
                dst = classes[(a, b)]
                opts = []
                for perm in permutations(dst):
                    if i == j:
                        for flips in product((0, 1), repeat=len(src)):
                            opts.append(list(zip(src, perm, flips)))
                    else:
                        flip = 0 if pi[i] < pi[j] else 1
                        opts.append([(s, d, flip) for s, d in zip(src, perm)])
                choices.append(opts)
            for combo in product(*choices):
                dart_map = {}
                for part in combo:
                    for s, d, flip in part:
                        dart_map[(s, 0)] = (d, flip)
                        dart_map[(s, 1)] = (d, 1 - flip)
                sign = 1
                for v in range(n3):
                    w = pi[v]
                    images = [dart_map[x] for x in at[v]]
                    pos = [at[w].index(y) for y in images]
                    sign *= _perm_sign(pos)
                if sign < 0:
                    return True
    return False


def count_diagrams(m, u):
    """Number of non-degenerate diagrams of degree m with u legs."""
    n3 = 2 * m - u
    if n3 < 0:
        return 0
    degrees = [3] * n3 + [1] * u
    classes = {}
    for A in _multigraphs(degrees):
        if not _connected(A):
            continue
        key = _canon(A, n3)
        if key not in classes:
            classes[key] = A
    return sum(1 for A in classes.values() if not _has_odd_automorphism(A, n3))


# ---------------------------------------------------------------- matching

def count_embeddings(D, rot, ends):
    """Embeddings of a fragment (``rot[v]`` = three labels, ints are ends)
    into diagram ``D`` by trying every assignment of (host vertex, rotation offset)."""
    nf = len(rot)
    where = {}
    for v, labels in enumerate(rot):
        for s, lab in enumerate(labels):
            if not isinstance(lab, int):
                where.setdefault(lab, []).append((v, s))
    total = 0
    for hosts in permutations(range(D.n3), nf):
        for offs in product(range(3), repeat=nf):
            def slot(v, s):
                return 3 * hosts[v] + (s + offs[v]) % 3
            if all(D.inv[slot(*a)] == slot(*b) for a, b in where.values()):
                total += 1
    return total


# ---------------------------------------------------------------- rank

def rational_rank(rows):
    mat = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c] / mat[rank][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank
