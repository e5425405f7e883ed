"""Exact rank of sparse rational matrices by multi-modular elimination."""
from __future__ import annotations

import random
from bisect import bisect_left
from fractions import Fraction

from . import _kernels

# primes just below 2**31; products of two residues fit in 63 bits
PRIMES = (2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
          2147483543, 2147483497, 2147483489, 2147483477, 2147483423)


class RankInstabilityError(RuntimeError):
    pass


class SparseMatrix:
    """Rows of exact rationals over an indexed column basis."""

    def __init__(self, ncols: int, rows=None, basis=None):
        self.ncols = ncols
        self.rows = []
        self.basis = basis
        for r in rows or ():
            self.append(r)

    def append(self, row):
        """Add a row given as ``{col: value}`` or ``[(col, value), ...]``."""
        items = row.items() if isinstance(row, dict) else row
        clean = {}
        for c, v in items:
            if not 0 <= c < self.ncols:
                raise IndexError(f"column {c} out of range")
            v = Fraction(v) + clean.get(c, 0)
            if v:
                clean[c] = v
            else:
                clean.pop(c, None)
        if clean:
            self.rows.append(dict(sorted(clean.items())))

    @property
    def nrows(self):
        return len(self.rows)

    def permuted_columns(self, order):
        """Matrix whose column ``i`` is the old column ``order[i]``."""
        pos = {c: i for i, c in enumerate(order)}
        return SparseMatrix(self.ncols, ({pos[c]: v for c, v in r.items()} for r in self.rows))

    def dense(self):
        out = [[Fraction(0)] * self.ncols for _ in self.rows]
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                out[i][c] = v
        return out

    def dump(self, path):
        """Write the triplet form ``row col num/den``."""
        with open(path, "w") as fh:
            fh.write(f"# {len(self.rows)} {self.ncols}\n")
            for i, r in enumerate(self.rows):
                for c, v in r.items():
                    fh.write(f"{i} {c} {v.numerator}/{v.denominator}\n")

    @classmethod
    def load(cls, path):
        rows = {}
        ncols = 0
        with open(path) as fh:
            for line in fh:
                if line.startswith("#"):
                    parts = line[1:].split()
                    if len(parts) == 2:
                        ncols = int(parts[1])
                    continue
                i, c, v = line.split()
                rows.setdefault(int(i), {})[int(c)] = Fraction(v)
                ncols = max(ncols, int(c) + 1)
        return cls(ncols, [rows[i] for i in sorted(rows)])


def _modp_rows(rows, p):
    for r in rows:
        cols = []
        vals = []
        for c, v in r.items():
            den = v.denominator % p
            if not den:
                raise ZeroDivisionError
            x = v.numerator % p * pow(den, p - 2, p) % p
            if x:
                cols.append(c)
                vals.append(x)
        yield cols, vals


def pivots_modp(M: SparseMatrix, p: int):
    return _kernels.echelon_modp(_modp_rows(M.rows, p), M.ncols, p)


def rational_rank(rows, ncols=None) -> int:
    """Dense Gaussian elimination over the rationals (oracle scale only)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0]) if ncols is None else ncols
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pr = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c] / pr[c]
                mat[i] = [a - f * b for a, b in zip(mat[i], pr)]
        rank += 1
    return rank


def _sparse_rational_rank(rows) -> int:
    pivots = {}
    for r in rows:
        r = dict(r)
        while r:
            c = min(r)
            prow = pivots.get(c)
            if prow is None:
                x = r[c]
                pivots[c] = {k: w / x for k, w in r.items()}
                break
            x = r[c]
            for k, w in prow.items():
                y = r.get(k, 0) - x * w
                if y:
                    r[k] = y
                else:
                    r.pop(k, None)
    return len(pivots)


def _prefix_counts(pivots, ncols):
    srt = sorted(pivots)
    return [bisect_left(srt, c) for c in range(ncols + 1)]


def _dominates(a, b, ncols):
    return all(x >= y for x, y in zip(_prefix_counts(a, ncols), _prefix_counts(b, ncols)))


def echelon_pivots(M: SparseMatrix, nprimes: int = 2, spot_rows: int = 24, seed: int = 0):
    """Pivot columns of the leftmost-pivot echelon form over the rationals.

    Computed modulo ``nprimes`` independent primes which must agree; a random
    subset of rows is additionally ranked with exact rationals and compared.
    """
    rng = random.Random(seed)
    primes = list(PRIMES)
    results = []
    used = []
    while len(results) < nprimes:
        if not primes:
            raise RankInstabilityError("ran out of primes")
        p = primes.pop(0)
        try:
            piv = pivots_modp(M, p)
        except ZeroDivisionError:
            continue
        results.append(piv)
        used.append(p)
    if any(r != results[0] for r in results):
        # an unlucky prime can only lower the rank of some column prefix, so
        # the true pivot set is the one whose prefix ranks dominate
        for p in primes[:3]:
            try:
                results.append(pivots_modp(M, p))
                used.append(p)
            except ZeroDivisionError:
                pass
        best = max(results, key=lambda r: _prefix_counts(r, M.ncols))
        if any(not _dominates(best, r, M.ncols) for r in results) or results.count(best) < 2:
            raise RankInstabilityError(f"pivot sets disagree across primes {used}")
        used = [used[results.index(best)]]
        results = [best]
    piv = results[0]
    if M.rows and spot_rows:
        k = min(spot_rows, len(M.rows))
        sample = [M.rows[i] for i in sorted(rng.sample(range(len(M.rows)), k))]
        sub = SparseMatrix(M.ncols, sample)
        exact = _sparse_rational_rank(sub.rows)
        mod = len(pivots_modp(sub, used[0]))
        if exact != mod:
            raise RankInstabilityError("rational spot check disagrees with modular rank")
    return piv


def rank(M: SparseMatrix, **kw) -> int:
    return len(echelon_pivots(M, **kw))


def suffix_ranks(pivots, ncols):
    """``out[c]`` = number of pivots at columns ``>= c``."""
    srt = sorted(pivots)
    return [len(srt) - bisect_left(srt, c) for c in range(ncols + 1)]


def quotient_dim(m: int, u: int, schemas=None) -> int:
    """dim of span(diagrams of degree (m,u)) modulo the given relation schemas.

    ``schemas=None`` means {IHX}, giving dim BB(m,u).  Including the (x)
    schema gives dim B(m,u).
    """
    from . import relations
    return relations.quotient_dim(m, u, schemas)
