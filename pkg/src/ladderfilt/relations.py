"""Local relations: a small schema language, fragment matching and substitution.

Schema files
------------
::

    schema IHX
    ends 4
    term 1
      vertex a
      vertex b
      edge x a b
      rotation a x 1 2
      rotation b x 3 4
    term 1
      ...

``vertex NAME`` declares a trivalent vertex, ``edge NAME V W`` an internal
edge, ``rotation V h1 h2 h3`` the cyclic order at ``V`` (integers are the
numbered ends, other labels are edge names).  ``strand I J`` joins two ends
directly.  ``ladder NAME EXPR PARITY h1 h2 h3 h4`` places an n-ladder whose
ends top-left, top-right, bottom-left, bottom-right carry the given labels;
``EXPR`` is an integer or a variable with an offset (``n``, ``n+2``).
``blob`` (the only line of a term) stands for the family of relations
killing every connected trivalent subgraph with at least three vertices and
exactly three boundary edges.  ``accelerate ihx`` lets the engine use the
compiled IHX generator, which the test-suite checks against the generic path.
``#`` starts a comment.
"""
from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import caps
from .diagram import Diagram, canonicalize, enumerate_diagrams, ihx_terms, internal_edges
from .errors import CapacityError, ParseError
from .lincomb import LinearCombination

SCHEMA_DIR = Path(__file__).with_name("schemas")

_EXPR = re.compile(r"^([A-Za-z_]\w*)?([+-]?\d+)?$")


@dataclass
class Term:
    coeff: Fraction
    vertices: list = field(default_factory=list)
    rotation: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    strands: list = field(default_factory=list)
    ladders: list = field(default_factory=list)  # (name, var, offset, parity, labels)
    blob: bool = False


@dataclass
class RelationSchema:
    name: str
    ends: int
    terms: list
    accelerate: str | None = None
    provenance: str = ""
    source: str = ""

    @property
    def variables(self):
        return sorted({lad[1] for t in self.terms for lad in t.ladders if lad[1]})

    @property
    def is_kill_family(self):
        return any(t.blob for t in self.terms)


@dataclass(frozen=True)
class Fragment:
    """Concrete fragment: ``rot[v]`` lists the three labels at vertex ``v``."""
    rot: tuple
    strands: tuple
    ends: int


@dataclass(frozen=True)
class Embedding:
    vmap: tuple   # fragment vertex -> (host vertex, rotation offset, reversed)
    ends: tuple   # end k (1-based) -> host dart at position k-1


# ---------------------------------------------------------------- parsing

def _parse_expr(tok, lineno, path):
    m = _EXPR.match(tok)
    if not m or not (m.group(1) or m.group(2)):
        raise ParseError(f"bad rung expression {tok!r}", lineno, path)
    var = m.group(1)
    off = int(m.group(2)) if m.group(2) else 0
    return var, off


def parse_schemas(text: str, path=None) -> list:
    schemas = []
    cur = None
    term = None
    prov = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            prov.append(stripped.lstrip("# "))
            continue
        line = stripped.split("#", 1)[0].split()
        if not line:
            continue
        kw, args = line[0], line[1:]
        if kw == "schema":
            if len(args) != 1:
                raise ParseError("schema takes one name", lineno, path)
            cur = RelationSchema(args[0], -1, [], provenance=" ".join(prov))
            prov = []
            schemas.append(cur)
            term = None
            continue
        if cur is None:
            raise ParseError(f"{kw!r} before any schema line", lineno, path)
        if kw == "ends":
            try:
                cur.ends = int(args[0])
            except (ValueError, IndexError):
                raise ParseError("ends takes an integer", lineno, path) from None
        elif kw == "accelerate":
            cur.accelerate = args[0] if args else None
        elif kw == "term":
            try:
                coeff = Fraction(args[0])
            except (ValueError, IndexError, ZeroDivisionError):
                raise ParseError("term takes a rational coefficient", lineno, path) from None
            term = Term(coeff)
            cur.terms.append(term)
        else:
            if term is None:
                raise ParseError(f"{kw!r} outside a term", lineno, path)
            if kw == "vertex":
                if len(args) != 1:
                    raise ParseError("vertex takes one name", lineno, path)
                term.vertices.append(args[0])
            elif kw == "edge":
                if len(args) != 3:
                    raise ParseError("edge takes NAME V W", lineno, path)
                term.edges[args[0]] = (args[1], args[2])
            elif kw == "rotation":
                if len(args) != 4:
                    raise ParseError("rotation takes a vertex and three labels", lineno, path)
                term.rotation[args[0]] = [_label(a) for a in args[1:]]
            elif kw == "strand":
                if len(args) != 2:
                    raise ParseError("strand takes two ends", lineno, path)
                term.strands.append((int(args[0]), int(args[1])))
            elif kw == "ladder":
                if len(args) != 7:
                    raise ParseError("ladder takes NAME EXPR PARITY and four labels", lineno, path)
                var, off = _parse_expr(args[1], lineno, path)
                if args[2] not in ("odd", "even", "any"):
                    raise ParseError("ladder parity must be odd, even or any", lineno, path)
                term.ladders.append((args[0], var, off, args[2], [_label(a) for a in args[3:]]))
            elif kw == "blob":
                term.blob = True
            else:
                raise ParseError(f"unknown keyword {kw!r}", lineno, path)
    for sch in schemas:
        _validate(sch, path)
    return schemas


def _label(tok):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def _validate(sch: RelationSchema, path):
    if sch.ends < 0:
        raise ParseError(f"schema {sch.name}: missing ends line", None, path)
    if not sch.terms:
        raise ParseError(f"schema {sch.name}: no terms", None, path)
    for i, t in enumerate(sch.terms, 1):
        if t.blob:
            continue
        seen_ends = []
        count = {}
        for v in t.vertices:
            if v not in t.rotation:
                raise ParseError(f"schema {sch.name} term {i}: vertex {v} has no rotation", None, path)
        for v, labels in t.rotation.items():
            if v not in t.vertices:
                raise ParseError(f"schema {sch.name} term {i}: rotation for undeclared vertex {v}", None, path)
            for lab in labels:
                if isinstance(lab, int):
                    seen_ends.append(lab)
                else:
                    count[lab] = count.get(lab, 0) + 1
        for lad in t.ladders:
            for lab in lad[4]:
                if isinstance(lab, int):
                    seen_ends.append(lab)
                else:
                    count[lab] = count.get(lab, 0) + 1
        for a, b in t.strands:
            seen_ends += [a, b]
        for name, c in count.items():
            if c != 2:
                raise ParseError(f"schema {sch.name} term {i}: edge {name} used {c} times", None, path)
            if name in t.edges:
                a, b = t.edges[name]
                if a not in t.rotation or b not in t.rotation:
                    raise ParseError(f"schema {sch.name} term {i}: edge {name} joins undeclared vertices", None, path)
        if sorted(seen_ends) != list(range(1, len(seen_ends) + 1)) or len(seen_ends) != sch.ends:
            raise ParseError(f"schema {sch.name} term {i}: end arity {len(seen_ends)} does not match ends {sch.ends}",
                             None, path)


def load_schemas(path=None) -> dict:
    """Load every ``*.schema`` file under ``path`` (default: the shipped corpus)."""
    base = Path(path) if path is not None else Path(os.environ.get("LADDERFILT_SCHEMAS", SCHEMA_DIR))
    files = [base] if base.is_file() else sorted(base.glob("*.schema"))
    out = {}
    for f in files:
        text = f.read_text()
        for sch in parse_schemas(text, f):
            sch.source = text
            out[sch.name] = sch
    return out


def corpus_hash(path=None) -> str:
    base = Path(path) if path is not None else Path(os.environ.get("LADDERFILT_SCHEMAS", SCHEMA_DIR))
    h = hashlib.sha256()
    for f in sorted(base.glob("*.schema")):
        h.update(f.name.encode())
        h.update(f.read_bytes())
    return h.hexdigest()[:16]


# ---------------------------------------------------------------- instantiation

def _ladder_rot(name, n, labels):
    """Vertices and rotations of a standard n-ladder with the given end labels."""
    tl, tr, bl, br = labels
    rot = {}
    for i in range(n):
        up_l = tl if i == 0 else f"{name}.L{i - 1}"
        down_l = bl if i == n - 1 else f"{name}.L{i}"
        up_p = tr if i == 0 else f"{name}.P{i - 1}"
        down_p = br if i == n - 1 else f"{name}.P{i}"
        rung = f"{name}.R{i}"
        rot[f"{name}.l{i}"] = [up_l, down_l, rung]
        rot[f"{name}.p{i}"] = [up_p, rung, down_p]
    return rot


def instantiate(sch: RelationSchema, **values) -> list:
    """Concrete ``(coeff, Fragment)`` terms for the given ladder variables."""
    out = []
    totals = set()
    for t in sch.terms:
        if t.blob:
            raise ValueError("the blob family has no concrete fragments")
        rot = {v: list(t.rotation[v]) for v in t.vertices}
        for name, var, off, parity, labels in t.ladders:
            n = (values[var] if var else 0) + off
            if n < 2:
                return []
            if parity == "odd" and n % 2 == 0 or parity == "even" and n % 2:
                raise ValueError(f"ladder {name} of {sch.name} needs {parity} length, got {n}")
            rot.update(_ladder_rot(name, n, labels))
        totals.add(len(rot))
        names = list(rot)
        out.append((t.coeff, Fragment(tuple(tuple(rot[v]) for v in names), tuple(t.strands), sch.ends)))
    if len(totals) > 1:
        raise ValueError(f"schema {sch.name} is not homogeneous for {values}")
    return out


def instantiations(sch: RelationSchema, n3: int):
    """All variable assignments whose fragments fit into ``n3`` trivalent vertices."""
    vars_ = sch.variables
    if not vars_:
        yield {}
        return
    parity = {}
    for t in sch.terms:
        for name, var, off, par, _ in t.ladders:
            if var and par != "any":
                parity[var] = (par == "odd") != (off % 2 == 1)
    from itertools import product
    ranges = []
    for v in vars_:
        vals = [n for n in range(0, n3 + 1)
                if v not in parity or (n % 2 == 1) == parity[v]]
        ranges.append(vals)
    for combo in product(*ranges):
        vals = dict(zip(vars_, combo))
        try:
            frags = instantiate(sch, **vals)
        except ValueError:
            continue
        if frags and len(frags[0][1].rot) <= n3:
            yield vals


# ---------------------------------------------------------------- matching

def _frag_edges(F: Fragment):
    """Internal edges as pairs of (vertex, slot)."""
    where = {}
    for v, labels in enumerate(F.rot):
        for s, lab in enumerate(labels):
            if not isinstance(lab, int):
                where.setdefault(lab, []).append((v, s))
    return where


def match(D: Diagram, F: Fragment, allow_reversal: bool = False) -> list:
    """All injective embeddings of ``F`` into ``D``.

    By default rotations must agree; with ``allow_reversal`` a host vertex
    may also carry the reversed rotation (see :func:`flip_to_match`).
    """
    nf = len(F.rot)
    if nf == 0:
        return []
    where = _frag_edges(F)
    partner = {}
    for lab, ((v, s), (w, t)) in where.items():
        partner[(v, s)] = (w, t)
        partner[(w, t)] = (v, s)
    # visiting order: BFS over internal edges, one component after another
    order = []
    seen = set()
    for root in range(nf):
        if root in seen:
            continue
        seen.add(root)
        i = len(order)
        order.append(root)
        while i < len(order):
            v = order[i]
            i += 1
            for s in range(3):
                p = partner.get((v, s))
                if p and p[0] not in seen:
                    seen.add(p[0])
                    order.append(p[0])
    n3 = D.n3
    inv = D.inv
    results = []
    assign = [None] * nf
    used = set()

    def slot(v, s):
        hv, off, rev = assign[v]
        return 3 * hv + ((off - s) if rev else (s + off)) % 3

    def consistent(v):
        for s in range(3):
            p = partner.get((v, s))
            if p is None:
                continue
            w, t = p
            if assign[w] is None:
                continue
            if inv[slot(v, s)] != slot(w, t):
                return False
        return True

    def candidates(v):
        # a vertex already placed and adjacent to v pins it down
        for s in range(3):
            p = partner.get((v, s))
            if p and assign[p[0]] is not None:
                w, t = p
                d = inv[slot(w, t)]
                if d >= 3 * n3:
                    return []
                hv = d // 3
                k = d - 3 * hv
                out = [(hv, (k - s) % 3, False)]
                if allow_reversal:
                    out.append((hv, (k + s) % 3, True))
                return out
        revs = (False, True) if allow_reversal else (False,)
        return [(hv, off, rev) for hv in range(n3) for off in range(3) for rev in revs]

    def rec(k):
        if k == nf:
            ends = [None] * F.ends
            for v, labels in enumerate(F.rot):
                for s, lab in enumerate(labels):
                    if isinstance(lab, int):
                        ends[lab - 1] = slot(v, s)
            if None in ends:
                return
            results.append(Embedding(tuple(assign), tuple(ends)))
            return
        v = order[k]
        for hv, off, rev in candidates(v):
            if hv in used:
                continue
            assign[v] = (hv, off, rev)
            if consistent(v):
                used.add(hv)
                rec(k + 1)
                used.discard(hv)
            assign[v] = None

    rec(0)
    return results


def flip_to_match(D: Diagram, emb: Embedding):
    """Reverse the host vertices that ``emb`` matched reversed.

    Returns the new host (equal to +-D by AS) and the embedding moved onto it.
    """
    flips = [hv for hv, _, rev in emb.vmap if rev]
    if not flips:
        return D, emb
    perm = list(range(len(D.inv)))
    for v in flips:
        perm[3 * v + 1], perm[3 * v + 2] = 3 * v + 2, 3 * v + 1
    E = D.relabel(perm)
    vmap = tuple((hv, (-off) % 3, False) if rev else (hv, off, rev) for hv, off, rev in emb.vmap)
    return E, Embedding(vmap, tuple(perm[d] for d in emb.ends))


# ---------------------------------------------------------------- substitution

def substitute(D: Diagram, emb: Embedding, term: Fragment) -> Diagram:
    """Replace the embedded pattern by ``term`` (same ends)."""
    removed = {hv for hv, _, _ in emb.vmap}
    keep = [v for v in range(D.n3) if v not in removed]
    nk = len(keep)
    nt = len(term.rot)
    N = nk + nt
    u = D.u
    newid = {}
    for i, v in enumerate(keep):
        for s in range(3):
            newid[3 * v + s] = 3 * i + s
    for j in range(u):
        newid[3 * D.n3 + j] = 3 * N + j
    inv = [-1] * (3 * N + u)

    def link(x, y):
        inv[x], inv[y] = y, x

    endpos = {d: k for k, d in enumerate(emb.ends)}
    outer = []
    for d in emb.ends:
        x = D.inv[d]
        outer.append(("end", endpos[x]) if x in endpos else ("dart", newid[x]))
    inner = [None] * term.ends
    where = {}
    for t, labels in enumerate(term.rot):
        for s, lab in enumerate(labels):
            dart = 3 * (nk + t) + s
            if isinstance(lab, int):
                inner[lab - 1] = ("dart", dart)
            else:
                where.setdefault(lab, []).append(dart)
    for a, b in term.strands:
        inner[a - 1] = ("end", b - 1)
        inner[b - 1] = ("end", a - 1)
    for darts in where.values():
        link(darts[0], darts[1])
    for d, e in enumerate(D.inv):
        if d in newid and e in newid:
            inv[newid[d]] = newid[e]

    def walk(k, side):
        for _ in range(2 * term.ends + 2):
            nxt = outer[k] if side == "in" else inner[k]
            if nxt[0] == "dart":
                return nxt[1]
            k = nxt[1]
            side = "out" if side == "in" else "in"
        raise ValueError("substitution closes a vertex-free circle")

    for k in range(term.ends):
        if inner[k][0] == "dart":
            link(inner[k][1], walk(k, "in"))
        if outer[k][0] == "dart":
            link(outer[k][1], walk(k, "out"))
    return Diagram.trusted(tuple(inv), N)


# ---------------------------------------------------------------- relation vectors

def _ihx_vectors(D: Diagram):
    for d in internal_edges(D):
        d2, d3 = ihx_terms(D, d)
        yield LinearCombination.from_signed([(1, canonicalize(X)) for X in (D, d2, d3)])


def schema_vectors(D: Diagram, sch: RelationSchema, values=None):
    """Relation vectors of ``sch`` centred at every embedding in ``D``."""
    if sch.accelerate == "ihx":
        yield from _ihx_vectors(D)
        return
    for vals in ([values] if values is not None else instantiations(sch, D.n3)):
        frags = instantiate(sch, **vals)
        if not frags:
            continue
        pattern = frags[0][1]
        if len(pattern.rot) > D.n3:
            continue
        for emb in match(D, pattern, allow_reversal=True):
            host, emb = flip_to_match(D, emb)
            pairs = []
            for c, F in frags:
                pairs.append((c, canonicalize(substitute(host, emb, F))))
            yield LinearCombination.from_signed(pairs)


def relation_vectors(m: int, u: int, schemas, basis=None, limit: int = 10 ** 7) -> list:
    """Deduplicated relation vectors of the given schemas on the (m,u) span.

    ``basis`` (code -> diagram) defaults to all non-degenerate diagrams.  When
    the (x) family is among the schemas, generators containing a three-end
    blob are zero and are dropped from every vector.
    """
    schemas = _as_schemas(schemas)
    kill = any(s.is_kill_family for s in schemas)
    if basis is None:
        basis = quotient_basis(m, u, schemas)
    out = {}
    for D in basis.values():
        for sch in schemas:
            if sch.is_kill_family:
                continue
            for vec in schema_vectors(D, sch):
                if kill:
                    vec = LinearCombination({k: c for k, c in vec.terms.items() if k in basis})
                if not vec:
                    continue
                key = vec.key()
                if key not in out:
                    out[key] = vec.normalized()
                    if len(out) > limit:
                        raise CapacityError(f"relation count at ({m},{u}) exceeded {limit}")
    return [out[k] for k in sorted(out)]


def _as_schemas(schemas):
    if schemas is None:
        return [load_schemas()["IHX"]]
    out = []
    corpus = None
    for s in schemas:
        if isinstance(s, str):
            if corpus is None:
                corpus = load_schemas()
            out.append(corpus[s])
        else:
            out.append(s)
    return out


_BASIS_CACHE: dict = {}


def quotient_basis(m: int, u: int, schemas=None) -> dict:
    """Generators of the span: all non-degenerate diagrams, minus blob carriers
    when the (x) family is present."""
    schemas = _as_schemas(schemas)
    kill = any(s.is_kill_family for s in schemas)
    key = (m, u, kill)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = enumerate_diagrams(m, u, blob_free=kill)
    basis = _BASIS_CACHE[key]
    # the cap applies to remembered results as well
    if len(basis) > caps.generators():
        raise CapacityError(f"span of ({m},{u}) has {len(basis)} generators, cap {caps.generators()}")
    return basis


def relation_matrix(m: int, u: int, schemas=None, basis=None, order=None):
    from .linalg import SparseMatrix
    schemas = _as_schemas(schemas)
    if basis is None:
        basis = quotient_basis(m, u, schemas)
    codes = list(order) if order is not None else list(basis)
    idx = {c: i for i, c in enumerate(codes)}
    M = SparseMatrix(len(codes), basis=codes)
    for vec in relation_vectors(m, u, schemas, basis):
        M.append({idx[k]: c for k, c in vec.terms.items()})
    return M


def quotient_dim(m: int, u: int, schemas=None) -> int:
    from .linalg import rank
    if m < 1 or u > 2 * m:
        return 0
    schemas = _as_schemas(schemas)
    basis = quotient_basis(m, u, schemas)
    if not basis:
        return 0
    M = relation_matrix(m, u, schemas, basis)
    return len(basis) - rank(M)


def holds(sch: RelationSchema, m: int, u: int, base=("IHX", "x")) -> bool:
    """True iff every instance of ``sch`` at (m,u) vanishes modulo ``base``."""
    return check(sch, m, u, base)[0]


def check(sch: RelationSchema, m: int, u: int, base=("IHX", "x")) -> tuple:
    """``(holds, instances)`` where ``instances`` counts the instance vectors
    that survive on the generators; zero instances means the check is vacuous."""
    from .linalg import rank
    base = _as_schemas(base)
    basis = quotient_basis(m, u, base)
    if not basis:
        return True, 0
    codes = list(basis)
    idx = {c: i for i, c in enumerate(codes)}
    M = relation_matrix(m, u, base, basis)
    r0 = rank(M) if M.rows else 0
    kill = any(s.is_kill_family for s in base)
    extra = {}
    for D in _all_hosts(m, u):
        for vec in schema_vectors(D, sch):
            if kill:
                vec = LinearCombination({k: c for k, c in vec.terms.items() if k in basis})
            if vec:
                extra.setdefault(vec.key(), vec)
    for key in sorted(extra):
        M.append({idx[k]: c for k, c in extra[key].terms.items()})
    return (rank(M) if M.rows else 0) == r0, len(extra)


def _all_hosts(m, u):
    return enumerate_diagrams(m, u).values()
