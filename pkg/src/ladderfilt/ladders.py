"""Ladders, the invariant delta = (f, o, e), reductions and the index sets T(m,u).

Reading convention for an n-ladder: the left rail ``L[0..n-1]`` and right
rail ``P[0..n-1]`` run top to bottom and rung ``i`` joins ``L[i]`` and
``P[i]``.  A left vertex is *standard* when its rotation is (up, down, rung),
a right vertex when it is (up, rung, down); every rewrite below keeps track
of the AS sign relative to that picture.  Mirroring the picture reverses all
vertices at once, so the sign of a rewrite touching an even number of
vertices does not depend on the reading.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .diagram import Diagram, canonical_labels, canonicalize, parse
from .errors import PreconditionError


@dataclass(frozen=True)
class Ladder:
    left: tuple
    right: tuple
    ends: tuple  # darts leaving the ladder: top-left, top-right, bottom-left, bottom-right

    @property
    def rungs(self) -> int:
        return len(self.left)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.left) | frozenset(self.right)

    @property
    def parity(self) -> str:
        return "odd" if self.rungs % 2 else "even"


@dataclass(frozen=True)
class LadderReport:
    ladders: tuple
    counts: dict
    delta: tuple


def delta_from_counts(counts) -> tuple:
    f = sum(c * ((i - 2) // 2) for i, c in counts.items())
    o = sum(c for i, c in counts.items() if i % 2)
    e = sum(c for i, c in counts.items() if i % 2 == 0)
    return (f, o, e)


def _vertex_adj(D: Diagram, v: int):
    """(dart, neighbor vertex) pairs at trivalent vertex v."""
    return [(d, D.vertex(D.inv[d])) for d in D.darts_of(v)]


def _dart_between(D, a, b, exclude=()):
    out = [d for d in D.darts_of(a) if D.vertex(D.inv[d]) == b and d not in exclude]
    return out


def squares(D: Diagram):
    """All 4-cycles of distinct trivalent vertices whose corners each have
    their third edge leaving the cycle.  Returned as cyclic vertex tuples."""
    n3 = D.n3
    found = {}
    for a in range(n3):
        adj = _vertex_adj(D, a)
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                da, b = adj[i]
                dd, d = adj[j]
                if b >= n3 or d >= n3 or b == d or a in (b, d):
                    continue
                for db, c in _vertex_adj(D, b):
                    if db == D.inv[da] or c >= n3 or c in (a, b, d):
                        continue
                    for dc, x in _vertex_adj(D, c):
                        if x != d or dc == D.inv[db]:
                            continue
                        if D.inv[dc] == D.inv[dd]:
                            continue
                        # cycle darts: da (a->b), db (b->c), dc (c->d), inv dd (d->a)
                        cyc = {da, D.inv[da], db, D.inv[db], dc, D.inv[dc], dd, D.inv[dd]}
                        verts = {a, b, c, d}
                        ok = True
                        for v in verts:
                            rest = [e for e in D.darts_of(v) if e not in cyc]
                            if len(rest) != 1 or D.vertex(D.inv[rest[0]]) in verts:
                                ok = False
                                break
                        if ok:
                            key = frozenset(min(e, D.inv[e]) for e in (da, db, dc, dd))
                            found.setdefault(key, (a, b, c, d))
    return list(found.values())


def _edge_key(x, y):
    return (x, y) if x < y else (y, x)


def all_ladders(D: Diagram):
    """Every n-ladder (n >= 2) of D as (left rail, right rail) vertex tuples."""
    sq = squares(D)
    # rung graph: rung (x, y) oriented -> list of next rungs (x', y') with x~x', y~y'
    links = {}
    for (a, b, c, d) in sq:
        for (x, y, x2, y2) in ((a, b, d, c), (b, c, a, d)):
            links.setdefault((x, y), []).append((x2, y2))
            links.setdefault((y, x), []).append((y2, x2))
            links.setdefault((x2, y2), []).append((x, y))
            links.setdefault((y2, x2), []).append((y, x))
    out = {}

    def emit(path):
        left = tuple(p[0] for p in path)
        right = tuple(p[1] for p in path)
        rungs = frozenset(_edge_key(x, y) for x, y in path)
        rails = frozenset(_edge_key(left[i], left[i + 1]) for i in range(len(left) - 1)) | \
            frozenset(_edge_key(right[i], right[i + 1]) for i in range(len(right) - 1))
        key = (rungs, rails)
        if key not in out:
            out[key] = (left, right)

    def grow(path, used):
        if len(path) >= 2:
            emit(path)
        x, y = path[-1]
        for (x2, y2) in links.get((x, y), ()):
            if x2 in used or y2 in used:
                continue
            if len(path) >= 2:
                px, py = path[-2]
                if x2 == px or y2 == py:
                    continue
            grow(path + [(x2, y2)], used | {x2, y2})

    for (x, y) in list(links):
        grow([(x, y)], {x, y})
    return out


def _ends(D, left, right):
    n = len(left)

    def outward(v, partners):
        darts = list(D.darts_of(v))
        used = []
        for w in partners:
            ds = [d for d in darts if D.vertex(D.inv[d]) == w and d not in used]
            used.append(ds[0])
        rest = [d for d in darts if d not in used]
        return rest[0]

    if n == 1:
        raise ValueError("not a ladder")
    tl = outward(left[0], [left[1], right[0]])
    tr = outward(right[0], [right[1], left[0]])
    bl = outward(left[-1], [left[-2], right[-1]])
    br = outward(right[-1], [right[-2], left[-1]])
    return (tl, tr, bl, br)


def maximal_ladders(D: Diagram):
    """Maximal ladders under the subgraph order, made vertex-disjoint.

    Overlapping maximal ladders (rings of squares) are resolved greedily:
    longest first, ties broken by canonical vertex labels.
    """
    lad = all_ladders(D)
    keys = list(lad)
    maximal = []
    for k in keys:
        rungs, rails = k
        edges = rungs | rails
        dominated = False
        for k2 in keys:
            if k2 == k:
                continue
            e2 = k2[0] | k2[1]
            if edges < e2:
                dominated = True
                break
        if not dominated:
            maximal.append(lad[k])
    if not maximal:
        return []
    _, _, labels = canonical_labels(D)

    def order(lr):
        left, right = lr
        verts = tuple(sorted(labels[v] for v in left + right))
        rungs = tuple(sorted(tuple(sorted((labels[x], labels[y]))) for x, y in zip(left, right)))
        return (-len(left), verts, rungs)

    maximal.sort(key=order)
    chosen = []
    taken = set()
    for left, right in maximal:
        vs = set(left) | set(right)
        if vs & taken:
            continue
        taken |= vs
        chosen.append(Ladder(left, right, _ends(D, left, right)))
    return chosen


def ladder_report(D: Diagram) -> LadderReport:
    ladders = tuple(maximal_ladders(D))
    counts = {}
    for L in ladders:
        counts[L.rungs] = counts.get(L.rungs, 0) + 1
    return LadderReport(ladders, counts, delta_from_counts(counts))


@lru_cache(maxsize=200000)
def delta_of_code(code: bytes) -> tuple:
    return ladder_report(parse(code)).delta


def delta(D: Diagram) -> tuple:
    return delta_of_code(canonicalize(D).code)


# ---------------------------------------------------------------- rewrites

def _rail_dart(D, v, w):
    return _dart_between(D, v, w)[0]


def _orientation(D, ladder, i, side):
    """+1 if the ladder vertex is standard, else -1."""
    L, P = ladder.left, ladder.right
    n = len(L)
    rail = L if side == 0 else P
    other = P if side == 0 else L
    v = rail[i]
    up = ladder.ends[0 if side == 0 else 1] if i == 0 else _rail_dart(D, v, rail[i - 1])
    down = ladder.ends[2 if side == 0 else 3] if i == n - 1 else _rail_dart(D, v, rail[i + 1])
    rung = _rail_dart(D, v, other[i])
    seq = (up, down, rung) if side == 0 else (up, rung, down)
    base = 3 * v
    pos = [d - base for d in seq]
    return 1 if pos in ([0, 1, 2], [1, 2, 0], [2, 0, 1]) else -1


def _flip_if(D: Diagram, sign: int) -> Diagram:
    if sign > 0 or D.n3 == 0:
        return D
    return D.reversed_at(0)


def _compact(n3: int, u: int, inv: dict, keep: list) -> Diagram:
    """Renumber darts after deleting trivalent vertices not in ``keep``."""
    newpos = {}
    for i, v in enumerate(keep):
        for k in range(3):
            newpos[3 * v + k] = 3 * i + k
    base_old = 3 * n3
    base_new = 3 * len(keep)
    for j in range(u):
        newpos[base_old + j] = base_new + j
    out = [0] * (base_new + u)
    for d, e in inv.items():
        if d in newpos:
            out[newpos[d]] = newpos[e]
    return Diagram(tuple(out), len(keep))


def reduce_square(D: Diagram, ladder: Ladder, at: int = 1) -> Diagram:
    """Remove rungs ``at`` and ``at+1`` (both interior) of a ladder with >= 4 rungs."""
    n = ladder.rungs
    if n < 4:
        raise PreconditionError(f"cannot reduce a {n}-ladder; at least 4 rungs needed")
    if not 1 <= at <= n - 3:
        raise PreconditionError("removed rungs must be interior")
    L, P = ladder.left, ladder.right
    sign = 1
    for i in (at, at + 1):
        sign *= _orientation(D, ladder, i, 0) * _orientation(D, ladder, i, 1)
    inv = dict(enumerate(D.inv))
    for rail in (L, P):
        top = _rail_dart(D, rail[at - 1], rail[at])
        bot = _rail_dart(D, rail[at + 2], rail[at + 1])
        inv[top], inv[bot] = bot, top
    gone = {L[at], P[at], L[at + 1], P[at + 1]}
    keep = [v for v in range(D.n3) if v not in gone]
    return _flip_if(_compact(D.n3, D.u, inv, keep), sign)


def add_square(D: Diagram, ladder: Ladder) -> Diagram:
    """Insert two standard rungs between rungs 1 and 2 of ``ladder``."""
    L, P = ladder.left, ladder.right
    n3, u = D.n3, D.u
    N = n3 + 4
    inv = {}
    for d, e in enumerate(D.inv):
        nd = d if d < 3 * n3 else d + 12
        ne = e if e < 3 * n3 else e + 12
        inv[nd] = ne
    a, b, c, d = n3, n3 + 1, n3 + 2, n3 + 3
    lt = _rail_dart(D, L[0], L[1])
    lb = D.inv[lt]
    rt = _rail_dart(D, P[0], P[1])
    rb = D.inv[rt]

    def link(x, y):
        inv[x], inv[y] = y, x

    # a = (up, down, rung), b = (up, rung, down), likewise c, d
    link(lt, 3 * a)
    link(3 * a + 1, 3 * c)
    link(3 * a + 2, 3 * b + 1)
    link(rt, 3 * b)
    link(3 * b + 2, 3 * d)
    link(3 * c + 1, lb)
    link(3 * c + 2, 3 * d + 1)
    link(3 * d + 2, rb)
    out = [0] * (3 * N + u)
    for x, y in inv.items():
        out[x] = y
    return Diagram(tuple(out), N)


def complete_reduction(D: Diagram, rng: random.Random | None = None) -> Diagram:
    """Remove free squares until every maximal ladder has 2 or 3 rungs.

    With ``rng`` the ladder and position of each step are chosen at random
    (used to test order independence).
    """
    while True:
        long = [L for L in maximal_ladders(D) if L.rungs >= 4]
        if not long:
            return D
        if rng is None:
            L = long[0]
            at = 1
        else:
            L = rng.choice(long)
            at = rng.randint(1, L.rungs - 3)
        D = reduce_square(D, L, at)


def s_choice(D: Diagram) -> Ladder:
    """The ladder receiving inserted squares: the one holding the least canonical vertex."""
    ladders = maximal_ladders(D)
    if not ladders:
        raise PreconditionError("diagram has no ladder")
    _, _, labels = canonical_labels(D)
    return min(ladders, key=lambda L: min(labels[v] for v in L.vertices))


def s(D: Diagram, ladder: Ladder | None = None) -> Diagram:
    """Add a square to a ladder of ``D`` (the conventional one by default)."""
    return add_square(D, ladder if ladder is not None else s_choice(D))


# ---------------------------------------------------------------- index sets

def admissible(m: int, u: int, t) -> bool:
    f, o, e = t
    if min(f, o, e) < 0:
        return False
    if o + e == 0 and f:
        return False
    return 4 * f + 6 * o + 4 * e <= 2 * m - u and 2 * f + 2 * o + e <= m - u + 1


def t_set(m: int, u: int) -> list:
    """T(m,u) in lexicographic order."""
    out = []
    top = max(0, 2 * m)
    for f in range(top + 1):
        for o in range(top + 1):
            for e in range(top + 1):
                if admissible(m, u, (f, o, e)):
                    out.append((f, o, e))
    return out


def ladder_diagram(n: int, closure: str = "legs") -> Diagram:
    """A standard n-ladder whose four ends are legs (``closure="legs"``) or
    joined top-left to bottom-left and top-right to bottom-right (``"ring"``
    is not a ladder closure; ``"cross"`` joins top-left to bottom-right)."""
    L = list(range(n))
    P = list(range(n, 2 * n))
    u = 4 if closure == "legs" else 0
    n3 = 2 * n
    inv = [-1] * (3 * n3 + u)

    def link(x, y):
        inv[x], inv[y] = y, x

    for i in range(n):
        l, p = L[i], P[i]
        link(3 * l + 2, 3 * p + 1)  # rung
        if i + 1 < n:
            link(3 * l + 1, 3 * L[i + 1])
            link(3 * p + 2, 3 * P[i + 1])
    tl, tr, bl, br = 3 * L[0], 3 * P[0], 3 * L[-1] + 1, 3 * P[-1] + 2
    if closure == "legs":
        for j, d in enumerate((tl, tr, bl, br)):
            link(d, 3 * n3 + j)
    elif closure == "cross":
        link(tl, br)
        link(tr, bl)
    else:
        link(tl, bl)
        link(tr, br)
    return Diagram(tuple(inv), n3)


# ---------------------------------------------------------------- filtration

def filtration_dims(m: int, u: int, schemas=("IHX", "x")) -> dict:
    """``t -> (dim F_t, dim G_t)`` for every t in T(m,u).

    Columns are ordered by delta ascending, so the span of the diagrams with
    delta >= t is a trailing block; with a leftmost-pivot echelon form of the
    relations, the relations supported on that block are exactly the rows
    pivoting inside it.
    """
    from .linalg import echelon_pivots, suffix_ranks
    from .relations import quotient_basis, relation_matrix

    ts = t_set(m, u)
    basis = quotient_basis(m, u, schemas)
    deltas = {c: delta_of_code(c) for c in basis}
    order = sorted(basis, key=lambda c: (deltas[c], c))
    M = relation_matrix(m, u, schemas, basis, order=order)
    piv = echelon_pivots(M) if M.rows else []
    tail = suffix_ranks(piv, len(order))
    keys = [deltas[c] for c in order]
    out = {}
    from bisect import bisect_left
    for t in ts:
        start = bisect_left(keys, t)
        out[t] = [len(order) - start - tail[start], 0]
    for i, t in enumerate(ts):
        nxt = out[ts[i + 1]][0] if i + 1 < len(ts) else 0
        out[t][1] = out[t][0] - nxt
    return {t: tuple(v) for t, v in out.items()}
