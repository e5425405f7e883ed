"""Uni/trivalent diagrams: representation, signed canonical forms, enumeration.

A :class:`Diagram` with ``n3`` trivalent and ``u`` univalent vertices lives on
the darts ``0 .. 3*n3+u-1``.  Trivalent vertex ``k`` owns darts ``3k, 3k+1,
3k+2`` listed in rotation order; univalent vertex ``j`` owns dart ``3*n3+j``.
``inv`` pairs darts into edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import NamedTuple

from . import _kernels, caps
from .errors import CapacityError, StructureError

ZERO = 0


class SignedCanonical(NamedTuple):
    code: bytes
    sign: int

    @property
    def hex(self) -> str:
        return self.code.hex()


@dataclass(frozen=True)
class Diagram:
    inv: tuple
    n3: int

    def __post_init__(self):
        inv = self.inv
        nd = len(inv)
        if nd < 3 * self.n3:
            raise StructureError("fewer darts than trivalent slots")
        for d, e in enumerate(inv):
            if not 0 <= e < nd or e == d or inv[e] != d:
                raise StructureError(f"dart {d}: involution is not a fixed-point-free pairing")
        if (self.n3 + self.u) % 2:
            raise StructureError("odd vertex count: degree is not an integer")
        if not self._connected():
            raise StructureError("diagram is not connected")

    @classmethod
    def trusted(cls, inv: tuple, n3: int) -> "Diagram":
        """Construct without validation; for internal rewrites of valid input."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "inv", inv)
        object.__setattr__(obj, "n3", n3)
        return obj

    @property
    def u(self) -> int:
        return len(self.inv) - 3 * self.n3

    @property
    def m(self) -> int:
        return (self.n3 + self.u) // 2

    @property
    def nv(self) -> int:
        return self.n3 + self.u

    def vertex(self, d: int) -> int:
        return d // 3 if d < 3 * self.n3 else self.n3 + d - 3 * self.n3

    def darts_of(self, v: int) -> tuple:
        if v < self.n3:
            return (3 * v, 3 * v + 1, 3 * v + 2)
        return (3 * self.n3 + v - self.n3,)

    def vstart(self) -> list:
        return [3 * v for v in range(self.n3)] + [3 * self.n3 + j for j in range(self.u + 1)]

    def edges(self) -> list:
        return [(d, e) for d, e in enumerate(self.inv) if d < e]

    def neighbors(self, v: int) -> list:
        return [self.vertex(self.inv[d]) for d in self.darts_of(v)]

    def legs(self) -> list:
        """Univalent vertices in order."""
        return list(range(self.n3, self.nv))

    def cyclomatic(self) -> int:
        return len(self.inv) // 2 - self.nv + 1

    def _connected(self) -> bool:
        nv = self.nv
        if nv == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == nv

    def canonical(self) -> SignedCanonical:
        return canonicalize(self)

    def reversed_at(self, v: int) -> "Diagram":
        """The same diagram with the rotation at trivalent vertex ``v`` reversed."""
        a, b = 3 * v + 1, 3 * v + 2
        perm = list(range(len(self.inv)))
        perm[a], perm[b] = b, a
        return self.relabel(perm)

    def relabel(self, perm) -> "Diagram":
        """Move dart ``d`` to position ``perm[d]`` (cells keep their structure)."""
        inv = [0] * len(self.inv)
        for d, e in enumerate(self.inv):
            inv[perm[d]] = perm[e]
        return Diagram(tuple(inv), self.n3)


def canonicalize(D: Diagram) -> SignedCanonical:
    nv = D.nv
    colors = [0] * D.n3 + [1] * D.u
    oriented = [1] * D.n3 + [0] * D.u
    code, sign, _ = _kernels.canon_graph(colors, D.vstart(), list(D.inv), oriented)
    return SignedCanonical(code, sign if nv else 1)


def canonical_labels(D: Diagram):
    colors = [0] * D.n3 + [1] * D.u
    oriented = [1] * D.n3 + [0] * D.u
    return _kernels.canon_graph(colors, D.vstart(), list(D.inv), oriented)


def parse(code) -> Diagram:
    """Rebuild the canonical representative (sign +1) from a code or its hex."""
    if isinstance(code, str):
        code = bytes.fromhex(code)
    nv = code[0]
    colors = list(code[1:1 + nv])
    pairs = code[1 + nv:]
    if len(pairs) % 2:
        raise StructureError("truncated canonical code")
    n3 = sum(1 for c in colors if c == 0)
    if colors != [0] * n3 + [1] * (nv - n3):
        raise StructureError("not a diagram code")
    edges = [(pairs[i], pairs[i + 1]) for i in range(0, len(pairs), 2)]
    rank = {}
    keyed = [[] for _ in range(nv)]  # per vertex: (key, edge index, side)
    for i, (a, b) in enumerate(edges):
        r = rank.get((a, b), 0)
        rank[(a, b)] = r + 1
        keyed[a].append(((b << 8) | r, i, 0))
        keyed[b].append(((a << 8) | r, i, 1))
    dart_of = {}
    for v in range(nv):
        base = 3 * v if v < n3 else 3 * n3 + v - n3
        want = 3 if v < n3 else 1
        if len(keyed[v]) != want:
            raise StructureError(f"vertex {v} has wrong valency")
        for slot, (_, i, side) in enumerate(sorted(keyed[v])):
            dart_of[(i, side)] = base + slot
    inv = [0] * (3 * n3 + nv - n3)
    for i in range(len(edges)):
        x, y = dart_of[(i, 0)], dart_of[(i, 1)]
        inv[x], inv[y] = y, x
    return Diagram.trusted(tuple(inv), n3)


# ---------------------------------------------------------------- exchange format

def to_text(D: Diagram) -> str:
    """Text record with the four fields of the exchange format."""
    lines = [f"darts {len(D.inv)}",
             "involution " + " ".join(f"{a}-{b}" for a, b in D.edges()),
             "vertices " + " ".join(",".join(map(str, D.darts_of(v))) for v in range(D.nv)),
             "rotation " + " ".join(",".join(map(str, D.darts_of(v))) for v in range(D.n3))]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Diagram:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key not in ("darts", "involution", "vertices", "rotation", "code"):
            raise StructureError(f"line {lineno}: unknown field {key!r}")
        fields[key] = rest.split()
    if "code" in fields:
        return parse(fields["code"][0])
    try:
        nd = int(fields["darts"][0])
        pairs = [tuple(map(int, p.split("-"))) for p in fields["involution"]]
        cells = [tuple(map(int, c.split(","))) for c in fields["vertices"]]
        rot = {frozenset(r): r for r in (tuple(map(int, c.split(","))) for c in fields.get("rotation", []))}
    except (KeyError, ValueError, IndexError) as exc:
        raise StructureError(f"malformed diagram record: {exc}") from None
    inv = [-1] * nd
    for a, b in pairs:
        if inv[a] != -1 or inv[b] != -1:
            raise StructureError(f"dart paired twice in {a}-{b}")
        inv[a], inv[b] = b, a
    if -1 in inv:
        raise StructureError("unpaired dart")
    tri = [rot.get(frozenset(c), c) for c in cells if len(c) == 3]
    uni = [c for c in cells if len(c) == 1]
    if len(tri) + len(uni) != len(cells) or sum(map(len, cells)) != nd:
        raise StructureError("vertex cells must have size 1 or 3 and cover every dart once")
    order = [d for c in tri for d in c] + [c[0] for c in uni]
    if sorted(order) != list(range(nd)):
        raise StructureError("vertex cells do not partition the darts")
    perm = [0] * nd
    for new, old in enumerate(order):
        perm[old] = new
    out = [0] * nd
    for d in range(nd):
        out[perm[d]] = perm[inv[d]]
    return Diagram(tuple(out), len(tri))


# ---------------------------------------------------------------- construction

def build(n3: int, u: int, pairs) -> Diagram:
    inv = [-1] * (3 * n3 + u)
    for a, b in pairs:
        inv[a], inv[b] = b, a
    return Diagram(tuple(inv), n3)


def theta() -> Diagram:
    return build(2, 0, [(0, 3), (1, 5), (2, 4)])


def strut() -> Diagram:
    return build(0, 2, [(0, 1)])


def wheel(u: int) -> Diagram:
    """Circle through ``u`` trivalent vertices, one leg at each."""
    pairs = []
    for k in range(u):
        pairs.append((3 * k + 1, 3 * ((k + 1) % u) + 2))
        pairs.append((3 * k, 3 * u + k))
    return build(u, u, pairs)


def necklace(k: int) -> Diagram:
    """A connected cubic multigraph on 2k vertices (seed for the core search)."""
    n = 2 * k
    pairs = []
    for i in range(n):
        j = (i + 1) % n
        pairs.append((3 * i + 1, 3 * j + 2))
    for i in range(0, n, 2):
        pairs.append((3 * i, 3 * (i + 1)))
    if k == 1:
        return theta()
    return build(n, 0, pairs)


def rewire(D: Diagram, slots, ends) -> Diagram:
    """Reconnect the four slot darts to the outer ends listed in ``ends``.

    ``slots[i]`` receives what used to hang at ``ends[i]`` (itself one of the
    slots).  Strands running between two slots are carried along.
    """
    inv = list(D.inv)
    pos = {s: i for i, s in enumerate(ends)}
    slotset = set(slots)
    for i, s in enumerate(slots):
        outer = D.inv[ends[i]]
        if outer in slotset:
            tgt = slots[pos[outer]]
        else:
            tgt = outer
        inv[s] = tgt
        inv[tgt] = s
    return Diagram.trusted(tuple(inv), D.n3)


def ihx_terms(D: Diagram, d: int):
    """The two partners of ``D`` under IHX on the edge through dart ``d``.

    With ``a = (d, a1, a2)`` and ``b = (inv d, b1, b2)`` the relation reads
    ``D + D2 + D3 = 0``.  Returns None for loops and for edges touching a leg.
    """
    e = D.inv[d]
    n3 = D.n3
    if d >= 3 * n3 or e >= 3 * n3 or d // 3 == e // 3:
        return None
    va, vb = d // 3, e // 3
    ka, kb = d - 3 * va, e - 3 * vb
    a1, a2 = 3 * va + (ka + 1) % 3, 3 * va + (ka + 2) % 3
    b1, b2 = 3 * vb + (kb + 1) % 3, 3 * vb + (kb + 2) % 3
    slots = (a1, a2, b1, b2)
    d2 = rewire(D, slots, (a2, b1, a1, b2))
    d3 = rewire(D, slots, (b1, a1, a2, b2))
    return d2, d3


def internal_edges(D: Diagram):
    """One dart per edge joining two distinct trivalent vertices."""
    t = 3 * D.n3
    return [d for d, e in enumerate(D.inv) if d < e < t and d // 3 != e // 3]


# ---------------------------------------------------------------- enumeration

def has_blob(D: Diagram) -> bool:
    """True iff D contains a connected trivalent subgraph with at least three
    vertices and exactly three boundary edges."""
    tri = [1] * D.n3 + [0] * D.u
    return bool(_kernels.has_three_end_blob(D.vstart(), list(D.inv), tri))


_CORE_CACHE: dict = {}


def closed_classes(k: int, limit: int = 10 ** 7) -> dict:
    """All connected cubic multigraphs (loops allowed) on ``2k`` vertices.

    Returns ``code -> representative``, degenerate classes included.  The
    search walks IH moves from a seed; these moves connect the whole class.
    """
    if k in _CORE_CACHE:
        return _CORE_CACHE[k]
    seed = necklace(k)
    found = {canonicalize(seed).code: seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for D in frontier:
            for d in internal_edges(D):
                for E in ihx_terms(D, d):
                    c = canonicalize(E).code
                    if c not in found:
                        found[c] = E
                        nxt.append(E)
                        if len(found) > limit:
                            raise CapacityError(f"core search at degree ({k},0) exceeded {limit} classes")
        frontier = nxt
    _CORE_CACHE[k] = found
    return found


def place_legs(core: Diagram, counts) -> Diagram:
    """Subdivide each edge ``i`` of ``core`` by ``counts[i]`` new leg-carrying vertices."""
    n3 = core.n3
    edges = core.edges()
    extra = sum(counts)
    N = n3 + extra
    inv = [-1] * (3 * N + extra)
    for d in range(3 * n3):
        inv[d] = core.inv[d]
    nxt = n3
    for (a, b), c in zip(edges, counts):
        if not c:
            continue
        prev = a
        for _ in range(c):
            w = nxt
            nxt += 1
            inv[prev], inv[3 * w] = 3 * w, prev
            inv[3 * w + 1] = 3 * N + (w - n3)
            inv[3 * N + (w - n3)] = 3 * w + 1
            prev = 3 * w + 2
        inv[prev], inv[b] = b, prev
    return Diagram.trusted(tuple(inv), N)


def _placements(ne: int, u: int):
    for combo in combinations_with_replacement(range(ne), u):
        counts = [0] * ne
        for i in combo:
            counts[i] += 1
        yield counts


def enumerate_diagrams(m: int, u: int, keep=None, limit: int | None = None,
                       blob_free: bool = False) -> dict:
    """Non-degenerate diagrams of degree ``m`` with ``u`` legs.

    Returns ``code -> representative`` (representatives have sign +1).  A
    non-degenerate diagram with a cycle is a cubic core with legs sitting on
    its edges (hanging trees would contain two legs at one vertex); the
    remaining shapes are wheels (cyclomatic number one) and the strut.
    ``keep`` optionally filters the diagrams.  ``blob_free`` keeps only
    diagrams without a three-end blob; leg placements are pruned by requiring
    a leg inside every blob of the core.
    """
    if m < 1 or u < 0 or u > 2 * m:
        raise ValueError(f"no diagrams of degree ({m},{u})")
    limit = caps.generators(limit)
    out = {}

    def add(D):
        if keep is not None and not keep(D):
            return
        if blob_free and has_blob(D):
            return
        code, sign = canonicalize(D)
        if sign and code not in out:
            out[code] = parse(code)
            if len(out) > limit:
                raise CapacityError(f"enumeration of ({m},{u}) exceeded {limit} generators")

    beta = m - u + 1
    if beta < 0:
        return out
    if beta == 0:
        if (m, u) == (1, 2):
            add(strut())
        return out
    if beta == 1:
        add(wheel(u))
        return out
    for core in closed_classes(m - u, limit).values():
        masks = []
        if blob_free:
            masks = _kernels.blob_masks(core.vstart(), list(core.inv), [1] * core.n3)
        for counts in _placements(len(core.edges()), u):
            if masks:
                used = 0
                for i, c in enumerate(counts):
                    if c:
                        used |= 1 << i
                if not all(mk & used for mk in masks):
                    continue
            add(place_legs(core, counts))
    return dict(sorted(out.items()))
