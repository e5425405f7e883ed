"""gl(N) and so(N) weight systems as state sums over ribbon structures.

A closed diagram is read as a ribbon graph.  For gl(N) every trivalent
vertex is either kept or reversed (sign -1 per reversal); for so(N) every
edge is either flat or half-twisted (sign -1 per twist).  Each state
contributes N to the power of its number of boundary components.

A diagram with legs is closed by gluing its legs, in a chosen cyclic order,
to one extra vertex standing for the Wilson loop; that vertex is never
reversed.  Certificates use the closure symmetrized over all leg orders,
which is the weight of the diagram's image under symmetrization and hence
well defined on BB(m,u).

With these conventions the gl state sum equals the contraction of
``Tr(X[Y,Z])`` tensors against the inverse trace form, and the so state sum
equals ``2**m`` times that contraction (see :func:`tensor_weight`).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from . import _kernels
from .diagram import Diagram, parse
from .lincomb import LinearCombination

ALGEBRAS = ("gl", "so")


class NPolynomial:
    """Polynomial in N with exact integer coefficients; ``coeffs[k]`` multiplies N**k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for k, c in (coeffs or {}).items():
            if c:
                self.coeffs[k] = self.coeffs.get(k, 0) + c
        self.coeffs = {k: c for k, c in self.coeffs.items() if c}

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return NPolynomial(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, s):
        return NPolynomial({k: c * s for k, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == ({0: other} if other else {})
        return isinstance(other, NPolynomial) and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, n):
        return sum(c * n ** k for k, c in self.coeffs.items())

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*N^{k}" for k, c in sorted(self.coeffs.items(), reverse=True))

    def as_list(self) -> list:
        if not self.coeffs:
            return []
        return [self.coeffs.get(k, 0) for k in range(max(self.coeffs) + 1)]


def glue_legs_to_circle(D: Diagram, order=None):
    """Ribbon graph ``(nv, vstart, inv, flippable)`` with the legs attached to one vertex.

    ``order[i]`` is the leg (0-based) sitting at position ``i`` around the
    new vertex.
    """
    n3, u = D.n3, D.u
    order = tuple(range(u)) if order is None else tuple(order)
    if sorted(order) != list(range(u)):
        raise ValueError("order must be a permutation of the legs")
    if u == 0:
        vstart = [3 * v for v in range(n3 + 1)]
        return n3, vstart, list(D.inv), [1] * n3
    pos = {leg: i for i, leg in enumerate(order)}
    base = 3 * n3
    inv = list(D.inv)
    relabel = {base + leg: base + pos[leg] for leg in range(u)}
    out = [0] * len(inv)
    for d, e in enumerate(inv):
        out[relabel.get(d, d)] = relabel.get(e, e)
    vstart = [3 * v for v in range(n3 + 1)] + [base + u]
    return n3 + 1, vstart, out, [1] * n3 + [0]


def _state_sum(nv, vstart, inv, flippable, algebra) -> NPolynomial:
    ne = len(inv) // 2
    coeffs = {}
    if algebra == "gl":
        idx = [v for v in range(nv) if flippable[v]]
        zero_tw = [0] * ne
        for state in product((0, 1), repeat=len(idx)):
            flips = [0] * nv
            for v, b in zip(idx, state):
                flips[v] = b
            k = _kernels.face_counts(nv, vstart, inv, flips, zero_tw)
            sgn = -1 if sum(state) % 2 else 1
            coeffs[k] = coeffs.get(k, 0) + sgn
    elif algebra == "so":
        flips = [0] * nv
        for state in product((0, 1), repeat=ne):
            k = _kernels.face_counts(nv, vstart, inv, flips, list(state))
            sgn = -1 if sum(state) % 2 else 1
            coeffs[k] = coeffs.get(k, 0) + sgn
    else:
        raise ValueError(f"unknown algebra {algebra!r}")
    return NPolynomial(coeffs)


def weight(D: Diagram, algebra: str = "gl", order=None) -> NPolynomial:
    return _state_sum(*glue_legs_to_circle(D, order), algebra)


def gl_weight(D: Diagram, order=None) -> NPolynomial:
    return weight(D, "gl", order)


def so_weight(D: Diagram, order=None) -> NPolynomial:
    return weight(D, "so", order)


def symmetrized_weight(D: Diagram, algebra: str = "gl") -> NPolynomial:
    """Sum of the weights over all leg orders (u! times the symmetrized value)."""
    total = NPolynomial()
    for order in permutations(range(D.u)):
        total = total + weight(D, algebra, order)
    return total


def combination_weight(lc: LinearCombination, algebra: str = "gl", symmetrize=True) -> NPolynomial:
    """Weight of a combination of canonical diagram codes (coefficients must be integral)."""
    total = NPolynomial()
    for code, c in lc.terms.items():
        if c.denominator != 1:
            raise ValueError("rescale the combination to integer coefficients first")
        D = parse(code)
        w = symmetrized_weight(D, algebra) if symmetrize else weight(D, algebra)
        total = total + w * int(c)
    return total


@dataclass(frozen=True)
class Certificate:
    code: str
    closure: str
    algebra: str
    coefficients: tuple

    def serialize(self) -> str:
        return f"{self.code} {self.closure} {self.algebra} {','.join(map(str, self.coefficients))}"

    @classmethod
    def parse(cls, line: str) -> "Certificate":
        code, closure, algebra, coeffs = line.split()
        return cls(code, closure, algebra, tuple(int(c) for c in coeffs.split(",")))


def certify_nonzero(D, algebras=ALGEBRAS):
    """A certificate that ``D`` (a diagram or a combination) is nonzero in BB, or None.

    None means "unknown", never "zero".
    """
    if isinstance(D, LinearCombination):
        if not D.terms:
            return None
        key = "+".join(f"{c}*{code.hex()}" for code, c in sorted(D.terms.items()))
        evals = ((a, combination_weight(D, a)) for a in algebras)
    else:
        from .diagram import canonicalize
        key = canonicalize(D).code.hex()
        evals = ((a, symmetrized_weight(D, a)) for a in algebras)
    for algebra, w in evals:
        if w:
            closure = "closed" if isinstance(D, Diagram) and D.u == 0 else "symmetrized"
            return Certificate(key, closure, algebra, tuple(w.as_list()))
    return None


# ---------------------------------------------------------------- tensor oracle

def _gl_basis(n):
    import numpy as np
    basis = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=np.int64)
            E[i, j] = 1
            basis.append(E)
    return basis


def _so_basis(n):
    import numpy as np
    basis = []
    for i in range(n):
        for j in range(i + 1, n):
            A = np.zeros((n, n), dtype=np.int64)
            A[i, j], A[j, i] = 1, -1
            basis.append(A)
    return basis


def tensor_weight(D: Diagram, algebra: str, n: int, order=None):
    """Direct contraction of Lie-algebra tensors (slow; test oracle only).

    Each trivalent vertex with darts (x, y, z) is ``Tr(X[Y,Z])`` in the
    defining representation; the Wilson vertex is ``Tr(X_1 ... X_u)``; edges
    contract with the inverse of the trace form.
    """
    import numpy as np
    basis = _gl_basis(n) if algebra == "gl" else _so_basis(n)
    B = np.array(basis, dtype=np.float64)
    ginv = np.linalg.inv(np.einsum("aij,bji->ab", B, B))
    prod3 = np.einsum("aij,bjk,cki->abc", B, B, B)
    vert = prod3 - prod3.transpose(0, 2, 1)
    nv, vstart, inv, flippable = glue_legs_to_circle(D, order)
    args = []
    for v in range(nv):
        darts = list(range(vstart[v], vstart[v + 1]))
        if flippable[v]:
            t = vert
        else:
            t = B
            for _ in darts[1:]:
                t = np.einsum("...ij,ajk->...aik", t, B)
            t = np.trace(t, axis1=-2, axis2=-1)
        # the inverse trace form is applied at the lower end of every edge,
        # after which both ends share one index
        for axis, d in enumerate(darts):
            if d < inv[d]:
                t = np.moveaxis(np.tensordot(t, ginv, axes=([axis], [0])), -1, axis)
        args += [t, [min(d, inv[d]) for d in darts]]
    path = np.einsum_path(*args, [], optimize=("greedy", 2 ** 26))[0]
    return float(np.einsum(*args, [], optimize=path))
