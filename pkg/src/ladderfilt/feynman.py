"""Feynman graphs: enumeration, the maps r, s and phi_f, forbidden cycles and mu.

A :class:`FeynmanGraph` stores typed vertices and a dart involution.  Vertex
``v`` owns the darts ``vstart[v] .. vstart[v+1]-1``:

* normal vertices (3 darts, listed in rotation order),
* photon ends (3 darts; slot 0 carries the photon edge, the others are unordered),
* tetravalent vertices (4 unordered darts),
* univalent vertices (1 dart).

A photon edge pairs the slot-0 darts of two photon ends.  For canonical
forms each photon edge is subdivided by a marker vertex of its own color.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

from . import _kernels, caps
from .diagram import Diagram, SignedCanonical, canonicalize, closed_classes
from .errors import CapacityError, PreconditionError, StructureError
from .ladders import Ladder, add_square, admissible, delta, s
from .lincomb import LinearCombination

NORMAL, PHOTON, TET, LEG = 0, 1, 2, 3
MARKER = 4
VALENCY = {NORMAL: 3, PHOTON: 3, TET: 4, LEG: 1}
KIND_NAMES = {NORMAL: "normal", PHOTON: "photon", TET: "tetravalent", LEG: "univalent"}


class FeynmanDegree(NamedTuple):
    m: int
    u: int
    p: int
    q: int

    @property
    def normal(self) -> int:
        return 2 * self.m - self.u - 6 * self.p - 4 * self.q


@dataclass(frozen=True)
class FeynmanGraph:
    kinds: tuple
    inv: tuple

    def __post_init__(self):
        vs = self.vstart()
        if vs[-1] != len(self.inv):
            raise StructureError("dart count does not match the vertex valencies")
        inv = self.inv
        photon_darts = {vs[v] for v, k in enumerate(self.kinds) if k == PHOTON}
        for d, e in enumerate(inv):
            if not 0 <= e < len(inv) or e == d or inv[e] != d:
                raise StructureError(f"dart {d}: involution is not a fixed-point-free pairing")
            if (d in photon_darts) != (e in photon_darts):
                raise StructureError("photon edges must join two photon ends")
        pairs = [(d, inv[d]) for d in photon_darts if d < inv[d]]
        if len(pairs) * 2 != len(photon_darts):
            raise StructureError("photon ends must be paired")
        if (self.twice_m()) % 2:
            raise StructureError("degree is not an integer")
        if not self._connected():
            raise StructureError("Feynman graph is not connected")

    @classmethod
    def trusted(cls, kinds, inv) -> "FeynmanGraph":
        obj = object.__new__(cls)
        object.__setattr__(obj, "kinds", tuple(kinds))
        object.__setattr__(obj, "inv", tuple(inv))
        return obj

    def vstart(self) -> list:
        out = [0]
        for k in self.kinds:
            out.append(out[-1] + VALENCY[k])
        return out

    def vertex_of(self) -> list:
        out = []
        for v, k in enumerate(self.kinds):
            out += [v] * VALENCY[k]
        return out

    def count(self, kind) -> int:
        return sum(1 for k in self.kinds if k == kind)

    def twice_m(self) -> int:
        return (self.count(NORMAL) + self.count(LEG) + 6 * (self.count(PHOTON) // 2)
                + 4 * self.count(TET))

    @property
    def degree(self) -> FeynmanDegree:
        return FeynmanDegree(self.twice_m() // 2, self.count(LEG), self.count(PHOTON) // 2,
                             self.count(TET))

    def photon_edges(self) -> list:
        vs = self.vstart()
        vo = self.vertex_of()
        out = []
        for v, k in enumerate(self.kinds):
            if k == PHOTON:
                w = vo[self.inv[vs[v]]]
                if v < w:
                    out.append((v, w))
        return out

    def _connected(self) -> bool:
        n = len(self.kinds)
        if not n:
            return True
        vs, vo = self.vstart(), self.vertex_of()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for d in range(vs[v], vs[v + 1]):
                w = vo[self.inv[d]]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    def canonical(self) -> SignedCanonical:
        return canonicalize_feynman(self)


# ---------------------------------------------------------------- canonical form

def _colored(G: FeynmanGraph):
    vs = G.vstart()
    vo = G.vertex_of()
    starts = set(vs)
    colors = list(G.kinds)
    inv = list(G.inv)
    nd = len(inv)
    for d in range(nd):
        e = G.inv[d]
        if d < e and G.kinds[vo[d]] == PHOTON and d in starts:
            a, b = nd, nd + 1
            nd += 2
            inv += [d, e]
            inv[d], inv[e] = a, b
            colors.append(MARKER)
            vs = vs + [nd]
    oriented = [1 if k == NORMAL else 0 for k in colors]
    return colors, vs, inv, oriented


def canonicalize_feynman(G: FeynmanGraph) -> SignedCanonical:
    colors, vs, inv, oriented = _colored(G)
    code, sign, _ = _kernels.canon_graph(colors, vs, inv, oriented)
    return SignedCanonical(code, sign if colors else 1)


def parse_feynman(code) -> FeynmanGraph:
    """Rebuild the sign +1 representative of a canonical code."""
    if isinstance(code, str):
        code = bytes.fromhex(code)
    nv = code[0]
    colors = list(code[1:1 + nv])
    raw = code[1 + nv:]
    edges = [(raw[i], raw[i + 1]) for i in range(0, len(raw), 2)]
    rank = {}
    keyed = [[] for _ in range(nv)]
    for i, (a, b) in enumerate(edges):
        r = rank.get((a, b), 0)
        rank[(a, b)] = r + 1
        keyed[a].append(((b << 8) | r, i, 0))
        keyed[b].append(((a << 8) | r, i, 1))
    keep = [v for v in range(nv) if colors[v] != MARKER]
    newid = {v: i for i, v in enumerate(keep)}
    kinds = [colors[v] for v in keep]
    vs = [0]
    for k in kinds:
        vs.append(vs[-1] + VALENCY[k])
    dart_of = {}
    for v in keep:
        items = sorted(keyed[v])
        if len(items) != VALENCY[colors[v]]:
            raise StructureError(f"vertex {v} has wrong valency")
        if colors[v] == PHOTON:
            items.sort(key=lambda t: (colors[edges[t[1]][1 - t[2]]] != MARKER, t[0]))
        base = vs[newid[v]]
        for slot, (_, i, side) in enumerate(items):
            dart_of[(i, side)] = base + slot
    inv = [0] * vs[-1]
    ends = {}
    for i, (a, b) in enumerate(edges):
        if colors[a] == MARKER or colors[b] == MARKER:
            mk, side = (a, 1) if colors[a] == MARKER else (b, 0)
            ends.setdefault(mk, []).append(dart_of[(i, side)])
            continue
        x, y = dart_of[(i, 0)], dart_of[(i, 1)]
        inv[x], inv[y] = y, x
    for x, y in ends.values():
        inv[x], inv[y] = y, x
    return FeynmanGraph.trusted(kinds, inv)


def from_diagram(D: Diagram) -> FeynmanGraph:
    """A diagram read as a Feynman graph without photon edges or tetravalent vertices."""
    return FeynmanGraph.trusted([NORMAL] * D.n3 + [LEG] * D.u, D.inv)


def to_text(G: FeynmanGraph) -> str:
    vs = G.vstart()
    vo = G.vertex_of()
    normal_edges = []
    photon = []
    for d, e in enumerate(G.inv):
        if d < e:
            if G.kinds[vo[d]] == PHOTON and d == vs[vo[d]]:
                photon.append(f"{d}-{e}")
            else:
                normal_edges.append(f"{d}-{e}")
    lines = [f"darts {len(G.inv)}",
             "involution " + " ".join(normal_edges + photon),
             "edgetype " + " ".join(["normal"] * len(normal_edges) + ["photon"] * len(photon)),
             "vertices " + " ".join(",".join(map(str, range(vs[v], vs[v + 1]))) for v in range(len(G.kinds))),
             "vertextype " + " ".join(KIND_NAMES[k] for k in G.kinds)]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> FeynmanGraph:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        fields[key] = rest.split()
    names = {v: k for k, v in KIND_NAMES.items()}
    try:
        pairs = [tuple(map(int, p.split("-"))) for p in fields["involution"]]
        types = fields.get("edgetype", ["normal"] * len(pairs))
        cells = [tuple(map(int, c.split(","))) for c in fields["vertices"]]
        kinds = [names[t] for t in fields["vertextype"]]
        nd = int(fields["darts"][0])
    except (KeyError, ValueError) as exc:
        raise StructureError(f"malformed Feynman graph record: {exc}") from None
    if len(types) != len(pairs) or len(kinds) != len(cells):
        raise StructureError("edgetype/vertextype lengths do not match")
    photon_darts = {d for (a, b), t in zip(pairs, types) if t == "photon" for d in (a, b)}
    order = []
    for c, k in zip(cells, kinds):
        if len(c) != VALENCY[k]:
            raise StructureError(f"cell {c} does not fit a {KIND_NAMES[k]} vertex")
        if k == PHOTON:
            ph = [d for d in c if d in photon_darts]
            if len(ph) != 1:
                raise StructureError("a photon end needs exactly one photon edge")
            c = tuple(ph) + tuple(d for d in c if d not in photon_darts)
        order += c
    if sorted(order) != list(range(nd)):
        raise StructureError("vertex cells do not partition the darts")
    perm = {old: new for new, old in enumerate(order)}
    inv = [-1] * nd
    for a, b in pairs:
        inv[perm[a]], inv[perm[b]] = perm[b], perm[a]
    return FeynmanGraph(tuple(kinds), tuple(inv))


# ---------------------------------------------------------------- enumeration

def _unoriented_code(D: Diagram) -> bytes:
    colors = [0] * D.n3 + [1] * D.u
    return _kernels.canon_graph(colors, D.vstart(), list(D.inv), [0] * D.nv)[0]


def _subdivide(D: Diagram, d: int) -> Diagram:
    """Put a new vertex carrying a leg on the edge through dart ``d``."""
    n3, u = D.n3, D.u
    old = 3 * n3
    shift = lambda x: x if x < old else x + 3
    inv = [0] * (3 * (n3 + 1) + u + 1)
    for x, y in enumerate(D.inv):
        inv[shift(x)] = shift(y)
    a, b = shift(d), shift(D.inv[d])
    w = 3 * n3
    leg = 3 * (n3 + 1) + u
    inv[a], inv[w] = w, a
    inv[b], inv[w + 1] = w + 1, b
    inv[w + 2], inv[leg] = leg, w + 2
    return Diagram.trusted(tuple(inv), n3 + 1)


@lru_cache(maxsize=None)
def underlying_graphs(m: int, u: int) -> tuple:
    """Connected uni/trivalent multigraphs of degree (m,u), rotations ignored.

    Every such graph is a cubic core (or a circle, or a single edge) with
    legs added by repeatedly subdividing edges, legs included.
    """
    beta = m - u + 1
    if beta < 0 or m < 1:
        return ()
    if beta == 0:
        if u < 2:
            return ()
        level = {None: Diagram((1, 0), 0)}
        steps = u - 2
    elif beta == 1:
        if u < 1:
            return ()
        level = {None: Diagram((1, 0, 3, 2), 1)}
        steps = u - 1
    else:
        level = dict(closed_classes(beta - 1))
        steps = u
    for _ in range(steps):
        nxt = {}
        for D in level.values():
            for d, _e in D.edges():
                E = _subdivide(D, d)
                nxt.setdefault(_unoriented_code(E), E)
        level = nxt
    return tuple(level.values())


def _mark(D: Diagram, photons, tets) -> FeynmanGraph:
    """Turn edges of ``D`` into photon edges and contract others into tetravalent vertices."""
    n3 = D.n3
    role = {}
    for a in photons:
        role[a // 3] = ("p", a)
        role[D.inv[a] // 3] = ("p", D.inv[a])
    for a in tets:
        role[a // 3] = ("t", a)
        role[D.inv[a] // 3] = ("t", None)
    kinds = []
    cells = []  # old darts of each new vertex, in slot order
    for v in range(n3):
        r = role.get(v)
        darts = [3 * v, 3 * v + 1, 3 * v + 2]
        if r is None:
            kinds.append(NORMAL)
            cells.append(darts)
        elif r[0] == "p":
            kinds.append(PHOTON)
            cells.append([r[1]] + [x for x in darts if x != r[1]])
        elif r[1] is not None:
            a = r[1]
            b = D.inv[a]
            kinds.append(TET)
            cells.append([x for x in darts if x != a] + [x for x in range(3 * (b // 3), 3 * (b // 3) + 3) if x != b])
    for j in range(D.u):
        kinds.append(LEG)
        cells.append([3 * n3 + j])
    pos = {}
    k = 0
    for c in cells:
        for x in c:
            pos[x] = k
            k += 1
    inv = [0] * k
    for x, y in pos.items():
        inv[y] = pos[D.inv[x]]
    return FeynmanGraph.trusted(kinds, inv)


@lru_cache(maxsize=None)
def enumerate_feynman(deg, limit: int | None = None) -> dict:
    """``code -> representative`` for the non-degenerate Feynman graphs of a degree."""
    deg = FeynmanDegree(*deg)
    limit = caps.generators(limit)
    m, u, p, q = deg
    if deg.normal < 0 or min(u, p, q) < 0 or m < 1:
        return {}
    base = m - 2 * p - q
    if base < 1:
        return {}
    out = {}
    for D in underlying_graphs(base, u):
        inner = [a for a, b in D.edges() if b < 3 * D.n3 and a // 3 != b // 3]
        for chosen in combinations(inner, p + q):
            verts = [x // 3 for a in chosen for x in (a, D.inv[a])]
            if len(set(verts)) != len(verts):
                continue
            for tets in combinations(chosen, q):
                photons = [a for a in chosen if a not in tets]
                G = _mark(D, photons, tets)
                code, sign = canonicalize_feynman(G)
                if sign and code not in out:
                    out[code] = parse_feynman(code)
                    if len(out) > limit:
                        raise CapacityError(f"Feynman enumeration of {tuple(deg)} exceeded {limit}")
    return out


# ---------------------------------------------------------------- the maps r, s, phi

def r(G: FeynmanGraph) -> Diagram:
    return r_with_blocks(G)[0]


def r_with_blocks(G: FeynmanGraph):
    """Replace tetravalent vertices by squares and photon edges by 3-ladders.

    The ends of a tetravalent vertex in slot order become the top-left,
    top-right, bottom-left and bottom-right ends of the square.  For a
    photon edge the lower-numbered end supplies the top ends and the other
    the bottom ends of the 3-ladder.
    """
    vs = G.vstart()
    n3 = 0
    dmap = {}
    links = []
    nnormal = 0
    blocks = []
    for v, k in enumerate(G.kinds):
        if k == NORMAL:
            for i in range(3):
                dmap[vs[v] + i] = 3 * n3 + i
            n3 += 1
            nnormal += 1
    for v, k in enumerate(G.kinds):
        if k == TET:
            blocks.append((2, n3, [vs[v] + i for i in range(4)]))
            n3 += 4
    for a, b in G.photon_edges():
        ends = [vs[a] + 1, vs[a] + 2, vs[b] + 1, vs[b] + 2]
        blocks.append((3, n3, ends))
        n3 += 6
    for n, start, ends in blocks:
        L = list(range(start, start + n))
        P = list(range(start + n, start + 2 * n))
        for i in range(n):
            links.append((3 * L[i] + 2, 3 * P[i] + 1))
            if i + 1 < n:
                links.append((3 * L[i] + 1, 3 * L[i + 1]))
                links.append((3 * P[i] + 2, 3 * P[i + 1]))
        for d, x in zip(ends, (3 * L[0], 3 * P[0], 3 * L[-1] + 1, 3 * P[-1] + 2)):
            dmap[d] = x
    legs = [v for v, k in enumerate(G.kinds) if k == LEG]
    for j, v in enumerate(legs):
        dmap[vs[v]] = 3 * n3 + j
    inv = [0] * (3 * n3 + len(legs))
    for x, y in links:
        inv[x], inv[y] = y, x
    for d, e in enumerate(G.inv):
        if d in dmap:
            inv[dmap[d]] = dmap[e]
    ladders = []
    for n, start, ends in blocks:
        L = tuple(range(start, start + n))
        P = tuple(range(start + n, start + 2 * n))
        ladders.append(Ladder(L, P, tuple(dmap[d] for d in ends)))
    return Diagram(tuple(inv), n3), ladders


def phi(f: int, G: FeynmanGraph) -> LinearCombination:
    """Canonical image of ``s^f(r(G))`` in degree ``(m+2f, u)``."""
    m, u, p, q = G.degree
    if not admissible(m + 2 * f, u, (f, p, q)):
        raise PreconditionError(f"({f},{p},{q}) is not in T({m + 2 * f},{u})")
    D, blocks = r_with_blocks(G)
    for _ in range(f):
        try:
            D = s(D)
        except PreconditionError:
            # r created no recognizable ladder (its blocks merged into a ring)
            if not blocks:
                raise
            D = add_square(D, blocks[0])
            blocks = []
    return LinearCombination.from_signed([(1, canonicalize(D))])


def excess(G: FeynmanGraph) -> int:
    """Compare delta(r(G)) with (0,p,q): 1 above, 0 equal, -1 below."""
    _, _, p, q = G.degree
    d = delta(r(G))
    t = (0, p, q)
    return (d > t) - (d < t)


# ---------------------------------------------------------------- forbidden cycles

def _adjacency(G: FeynmanGraph):
    vs, vo = G.vstart(), G.vertex_of()
    adj = [[] for _ in G.kinds]
    for d, e in enumerate(G.inv):
        kind = "photon" if G.kinds[vo[d]] == PHOTON and d == vs[vo[d]] else "normal"
        adj[vo[d]].append((vo[e], d, kind))
    return adj


def simple_cycles(G: FeynmanGraph, max_len: int):
    """Cycles up to ``max_len`` as (vertex tuple, edge-dart tuple); loops have length 1."""
    adj = _adjacency(G)
    out = []
    for v, nb in enumerate(adj):
        for w, d, _k in nb:
            if w == v and d < G.inv[d]:
                out.append(((v,), (d,)))

    def ext(path, darts):
        v = path[-1]
        for w, d, _k in adj[v]:
            if w == path[0] and len(path) >= 2:
                if len(path) == 2 and d == G.inv[darts[0]]:
                    continue
                cyc = (tuple(path), tuple(darts) + (d,))
                # count each cycle once: start at its least vertex, fix direction
                if path[0] == min(path) and (len(path) == 2 and darts[0] < d or len(path) > 2 and path[1] < path[-1]):
                    out.append(cyc)
            elif w not in path and w > path[0] and len(path) < max_len:
                ext(path + [w], darts + [d])

    for v in range(len(adj)):
        ext([v], [])
    return out


@dataclass(frozen=True)
class CyclePattern:
    """A forbidden cycle: vertex kinds around the cycle and the photon positions.

    ``kinds[i]`` is the kind of the i-th cycle vertex, ``photon[i]`` whether
    the edge from vertex i to vertex i+1 is a photon edge.  Matching is up
    to rotation and reflection of the cycle.
    """
    name: str
    kinds: tuple
    photon: tuple
    provenance: str = ""

    def matches(self, kinds, photon) -> bool:
        n = len(self.kinds)
        if len(kinds) != n:
            return False
        for rev in (False, True):
            ks = kinds[::-1] if rev else kinds
            ph = (photon[::-1][1:] + photon[::-1][:1]) if rev else photon
            for s0 in range(n):
                if (tuple(ks[s0:] + ks[:s0]) == self.kinds
                        and tuple(ph[s0:] + ph[:s0]) == self.photon):
                    return True
        return False


PATTERN_FILE = __import__("pathlib").Path(__file__).with_name("schemas") / "forbidden.cycles"
_KIND_CODES = {"n": NORMAL, "p": PHOTON, "t": TET}


def load_patterns(path=None) -> list:
    """Read cycle patterns: ``cycle NAME`` then a word over n/p/t, ``~`` marking photon edges."""
    from .errors import ParseError
    path = PATTERN_FILE if path is None else path
    out = []
    prov = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                prov.append(line.lstrip("# "))
                continue
            parts = line.split()
            if parts[0] != "cycle" or len(parts) != 3:
                raise ParseError("expected 'cycle NAME WORD'", lineno, path)
            word = parts[2]
            kinds, photon = [], []
            for ch in word:
                if ch == "~":
                    if not kinds or photon[-1]:
                        raise ParseError("misplaced photon mark", lineno, path)
                    photon[-1] = True
                elif ch in _KIND_CODES:
                    kinds.append(_KIND_CODES[ch])
                    photon.append(False)
                else:
                    raise ParseError(f"unknown vertex letter {ch!r}", lineno, path)
            out.append(CyclePattern(parts[1], tuple(kinds), tuple(photon), " ".join(prov)))
            prov = []
    return out


def forbidden(G: FeynmanGraph, m: int | None = None, patterns=None) -> str | None:
    """Name of the first forbidden configuration found in ``G``, else None.

    Cycles of length 1 and 3 are always forbidden, cycles of length 2 only
    for ``m > 2``; longer cycles are checked against ``patterns``.
    """
    m = G.degree.m if m is None else m
    patterns = load_patterns() if patterns is None else patterns
    longest = max([len(pt.kinds) for pt in patterns] + [3])
    vs, vo = G.vstart(), G.vertex_of()
    for verts, darts in simple_cycles(G, longest):
        n = len(verts)
        if n == 1:
            return "cycle1"
        if n == 2 and m > 2:
            return "cycle2"
        if n == 3:
            return "cycle3"
        if n >= 4:
            kinds = [G.kinds[v] for v in verts]
            photon = [G.kinds[vo[d]] == PHOTON and d == vs[vo[d]] for d in darts]
            for pt in patterns:
                if pt.matches(kinds, photon):
                    return pt.name
    return None


# ---------------------------------------------------------------- relations and mu

def _rewire(G: FeynmanGraph, slots, ends) -> FeynmanGraph:
    inv = list(G.inv)
    pos = {x: i for i, x in enumerate(ends)}
    slotset = set(slots)
    for i, x in enumerate(slots):
        outer = G.inv[ends[i]]
        tgt = slots[pos[outer]] if outer in slotset else outer
        inv[x] = tgt
        inv[tgt] = x
    return FeynmanGraph.trusted(G.kinds, inv)


def ihx_vectors(G: FeynmanGraph):
    """IHX on every edge joining two distinct normal vertices."""
    vs, vo = G.vstart(), G.vertex_of()
    out = []
    for d, e in enumerate(G.inv):
        va, vb = vo[d], vo[e]
        if d > e or va == vb or G.kinds[va] != NORMAL or G.kinds[vb] != NORMAL:
            continue
        ka, kb = d - vs[va], e - vs[vb]
        a1, a2 = vs[va] + (ka + 1) % 3, vs[va] + (ka + 2) % 3
        b1, b2 = vs[vb] + (kb + 1) % 3, vs[vb] + (kb + 2) % 3
        slots = (a1, a2, b1, b2)
        terms = [G, _rewire(G, slots, (a2, b1, a1, b2)), _rewire(G, slots, (b1, a1, a2, b2))]
        out.append(LinearCombination.from_signed((1, canonicalize_feynman(T)) for T in terms))
    return out


def lihx_vectors(G: FeynmanGraph):
    """The three ways of pairing the four normal ends of a photon edge sum to zero."""
    vs = G.vstart()
    out = []
    for a, b in G.photon_edges():
        a1, a2, b1, b2 = vs[a] + 1, vs[a] + 2, vs[b] + 1, vs[b] + 2
        slots = (a1, a2, b1, b2)
        terms = [G, _rewire(G, slots, (a2, b1, a1, b2)), _rewire(G, slots, (b1, a1, a2, b2))]
        out.append(LinearCombination.from_signed((1, canonicalize_feynman(T)) for T in terms))
    return out


def relation_vectors(G: FeynmanGraph):
    """All linear relations (IHX, LIHX, four-term) generated at ``G``."""
    return ihx_vectors(G) + lihx_vectors(G) + four_term_vectors(G)


def _region(G: FeynmanGraph, v: int):
    """Vertices and boundary darts of the region (tetravalent vertex or photon edge) at ``v``."""
    vs, vo = G.vstart(), G.vertex_of()
    if G.kinds[v] == TET:
        return {v}, [vs[v] + i for i in range(4)]
    w = vo[G.inv[vs[v]]]
    return {v, w}, [vs[v] + 1, vs[v] + 2, vs[w] + 1, vs[w] + 2]


def four_term_vectors(G: FeynmanGraph):
    """Sum over attaching an edge at every end of a tetravalent vertex or photon edge.

    Each normal vertex ``w`` next to such a region, together with a choice
    of one of its two other edges as the attached edge ``x``, determines a
    relation; the new vertex always reads (x, towards the region, away).
    """
    vs, vo = G.vstart(), G.vertex_of()
    out = []
    for w, k in enumerate(G.kinds):
        if k != NORMAL:
            continue
        for i in range(3):
            d0 = vs[w] + i
            rv = vo[G.inv[d0]]
            if G.kinds[rv] not in (TET, PHOTON):
                continue
            region, bdry = _region(G, rv)
            d1, d2 = vs[w] + (i + 1) % 3, vs[w] + (i + 2) % 3
            for x, y in ((d1, d2), (d2, d1)):
                far = G.inv[x]
                if vo[far] in region or vo[G.inv[y]] == w:
                    continue
                host = list(G.inv)
                r0, ry = G.inv[d0], G.inv[y]
                host[r0], host[ry] = ry, r0
                terms = []
                for b in bdry:
                    inv = list(host)
                    away = inv[b]
                    inv[d0], inv[b] = b, d0
                    inv[y], inv[away] = away, y
                    inv[x], inv[far] = far, x
                    # w now reads (x, towards, away) up to the rotation offset
                    slots = [x, d0, y]
                    rot = [vs[w] + j for j in range(3)]
                    perm = {}
                    for a, want in zip(slots, _cyc(rot, x)):
                        perm[a] = want
                    T = _place(G.kinds, inv, perm)
                    terms.append((1, canonicalize_feynman(T)))
                out.append(LinearCombination.from_signed(terms))
    return out


def _cyc(rot, start):
    j = rot.index(start)
    return rot[j:] + rot[:j]


def _place(kinds, inv, perm):
    """Move the darts of one vertex according to ``perm`` (old dart -> new dart)."""
    full = list(range(len(inv)))
    for a, b in perm.items():
        full[a] = b
    out = [0] * len(inv)
    for d, e in enumerate(inv):
        out[full[d]] = full[e]
    return FeynmanGraph.trusted(kinds, out)


class MuResult(NamedTuple):
    value: int
    generators: int
    alive: int
    killed: dict
    below: int


@lru_cache(maxsize=None)
def mu_details(m: int, u: int, o: int, e: int, patterns_path=None) -> MuResult:
    """mu(m,u,o,e) with the bookkeeping of which generators were discarded and why."""
    from .linalg import SparseMatrix, rank
    deg = FeynmanDegree(m, u, o, e)
    graphs = enumerate_feynman(deg)
    patterns = load_patterns(patterns_path)
    killed = {}
    alive = []
    below = 0
    for code, G in graphs.items():
        why = forbidden(G, m, patterns)
        if why is None:
            ex = excess(G)
            if ex > 0:
                why = "ladder-excess"
            elif ex < 0:
                below += 1
        if why:
            killed[why] = killed.get(why, 0) + 1
        else:
            alive.append(code)
    index = {c: i for i, c in enumerate(sorted(alive))}
    M = SparseMatrix(len(index))
    for G in graphs.values():
        for vec in relation_vectors(G):
            row = {index[c]: v for c, v in vec.terms.items() if c in index}
            if row:
                M.append(row)
    r_ = rank(M) if M.rows else 0
    return MuResult(len(index) - r_, len(graphs), len(index), killed, below)


def mu(m: int, u: int, o: int, e: int) -> int:
    """Upper bound for dim G(f,o,e)B(m+2f,u), valid for every f."""
    return mu_details(m, u, o, e).value


# ---------------------------------------------------------------- validation

class _QuotientTest:
    """Decides whether combinations of diagrams vanish in G(t)B(m,u)."""

    def __init__(self, m, u, t):
        from .ladders import delta_of_code
        from .linalg import SparseMatrix, rank
        from .relations import quotient_basis, relation_matrix
        basis = quotient_basis(m, u, ("IHX", "x"))
        keep = sorted(c for c in basis if not delta_of_code(c) > t)
        self.index = {c: i for i, c in enumerate(keep)}
        full = relation_matrix(m, u, ("IHX", "x"), basis)
        cols = sorted(basis)
        rows = []
        for row in full.rows:
            r_ = {self.index[cols[c]]: v for c, v in row.items() if cols[c] in self.index}
            if r_:
                rows.append(r_)
        self.M = SparseMatrix(len(keep), rows)
        self._rank = rank
        self.base = rank(self.M) if rows else 0

    def vanishes(self, lc: LinearCombination) -> bool:
        from .linalg import SparseMatrix
        row = {self.index[c]: v for c, v in lc.terms.items() if c in self.index}
        if not row:
            return True
        M = SparseMatrix(self.M.ncols, self.M.rows + [row])
        return self._rank(M) == self.base


def image(f: int, lc: LinearCombination) -> LinearCombination:
    """phi_f applied to a combination of Feynman graph codes."""
    out = LinearCombination()
    for code, c in lc.terms.items():
        out = out + phi(f, parse_feynman(code)) * c
    return out


def validate_cell(m: int, u: int, p: int, q: int, f: int = 0) -> dict:
    """Check that every relation and every discarded generator of the cell
    maps to zero in G(f,p,q)B(m+2f,u).  Returns failure counts by kind."""
    graphs = enumerate_feynman(FeynmanDegree(m, u, p, q))
    test = _QuotientTest(m + 2 * f, u, (f, p, q))
    patterns = load_patterns()
    fails = {}
    for code, G in graphs.items():
        why = forbidden(G, m, patterns) or ("ladder-excess" if excess(G) > 0 else None)
        if why and not test.vanishes(phi(f, G)):
            fails[why] = fails.get(why, 0) + 1
        for name, vecs in (("IHX", ihx_vectors(G)), ("LIHX", lihx_vectors(G)),
                           ("4T", four_term_vectors(G))):
            for vec in vecs:
                if not test.vanishes(image(f, vec)):
                    fails[name] = fails.get(name, 0) + 1
    return fails
