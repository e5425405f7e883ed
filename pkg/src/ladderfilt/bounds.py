"""Upper bounds for dim BB(m,u) from bounds on the filtration quotients."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InfeasibleError, LadderfiltError, ParseError
from .ladders import t_set


def sqnum(n: int) -> int:
    """q_n = floor(n^2/12 + 1/2); zero for negative n."""
    if n < 0:
        return 0
    return (n * n + 6) // 12


def lambda0_dim_bound(n: int) -> int:
    """Upper bound 1 + q_n for the degree-n part of Lambda_0."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return 1 + sqnum(n)


def conjecture3(m: int, u: int) -> int:
    """Conjectured closed form for dim BB(m,u), u in {0,2,4,6}."""
    if u == 0:
        return conjecture3(m + 1, 2)
    if u == 2:
        return ((m - 2) ** 2 + 18) // 12
    if u == 4:
        return ((2 * m - 7) ** 2 + 24) // 24
    if u == 6:
        return ((2 * m - 11) ** 2 + 18) // 12
    raise ValueError(f"no closed form for u={u}")


def conjecture2_predicts_trivial(m: int, u: int) -> bool:
    """Whether the triviality conjecture covers the quotients G(f,o,e)B(m+2f,u)."""
    return m > u + 1 > 0 and 2 * m > 5 * (u - 2)


class MissingEntry(LadderfiltError, KeyError):
    exit_code = 5


@dataclass
class MuTable:
    """Values mu(m,u,o,e) with a provenance tag (computed, assumed-zero or supplied)."""
    entries: dict = field(default_factory=dict)

    def set(self, m, u, o, e, value, provenance="computed"):
        if value < 0:
            raise ValueError("mu values are nonnegative")
        self.entries[(m, u, o, e)] = (int(value), provenance)

    def get(self, m, u, o, e) -> int:
        try:
            return self.entries[(m, u, o, e)][0]
        except KeyError:
            raise MissingEntry(f"no mu entry for (m,u,o,e)=({m},{u},{o},{e})") from None

    def provenance(self, m, u, o, e) -> str:
        return self.entries[(m, u, o, e)][1]

    def assumed(self) -> list:
        return sorted(k for k, (_, p) in self.entries.items() if p == "assumed-zero")

    def rows(self) -> list:
        return [f"{m},{u},{o},{e},{v},{p}" for (m, u, o, e), (v, p) in sorted(self.entries.items())]

    def dump(self, path):
        with open(path, "w") as fh:
            fh.write("# m,u,o,e,value,provenance\n")
            for row in self.rows():
                fh.write(row + "\n")

    @classmethod
    def load(cls, path) -> "MuTable":
        out = cls()
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                try:
                    m, u, o, e, v = map(int, parts[:5])
                except ValueError:
                    raise ParseError("expected m,u,o,e,value[,provenance]", lineno, path) from None
                prov = parts[5].strip() if len(parts) > 5 else "supplied"
                out.set(m, u, o, e, v, prov)
        return out


def mu_indices(m: int, u: int) -> list:
    """(j, o, e) for every mu entry appearing in the bound for BB(m,u)."""
    out = []
    for j in range(u, m + 1):
        for f, o, e in t_set(j, u):
            if f == 0:
                out.append((j, o, e))
    return out


def computed_mu_table(m_max: int, u: int, table: MuTable | None = None) -> MuTable:
    from .feynman import mu
    table = MuTable() if table is None else table
    for j, o, e in mu_indices(m_max, u):
        if (j, u, o, e) not in table.entries:
            table.set(j, u, o, e, mu(j, u, o, e), "computed")
    return table


def _coefficients(m: int, u: int) -> dict:
    coeff = {}
    for j, o, e in mu_indices(m, u):
        coeff[(j, u, o, e)] = 1 + sqnum(m - j) if o + e == 0 else sqnum(m - j + 3)
    return coeff


def _constant(m: int, u: int) -> int:
    return sqnum(m - 6) if u == 4 else 0


def bb_bound(m: int, u: int, mu: MuTable) -> int:
    """The upper bound for dim BB(m,u) in terms of mu."""
    if not m >= u >= 0:
        raise ValueError("need m >= u >= 0")
    total = _constant(m, u)
    for key, c in _coefficients(m, u).items():
        total += c * mu.get(*key)
    return total


@dataclass(frozen=True)
class SandwichEntry:
    index: tuple
    upper: int
    forced: int

    @property
    def proven_nonzero(self) -> bool:
        return self.forced >= 1


def sandwich(m: int, u: int, exact_bb: int, mu: MuTable) -> list:
    """Lower bounds for each mu entry forced by bound >= exact dimension.

    Entries are treated one at a time with all others at their upper bound.
    Raises :class:`InfeasibleError` when the bound is already below the
    exact value.
    """
    bound = bb_bound(m, u, mu)
    if bound < exact_bb:
        raise InfeasibleError(f"bound {bound} < exact dim {exact_bb} for BB({m},{u})")
    out = []
    for key, c in sorted(_coefficients(m, u).items()):
        val = mu.get(*key)
        forced = 0
        if c:
            rest = bound - c * val
            need = exact_bb - rest
            forced = max(0, -(-need // c))
        out.append(SandwichEntry(key, val, forced))
    return out


def bound_row(m: int, u: int, bound: int, exact: int | None) -> str:
    sharp = "" if exact is None else ("yes" if bound == exact else "no")
    return f"{m},{u},{bound},{'' if exact is None else exact},{sharp}"
