"""Command-line entry point: ``ladderfilt <command> [options]``.

Every cell result is cached under ``$LADDERFILT_CACHE`` and appended to the
row tables there.  Exit codes: 0 success, 2 capacity, 3 infeasible bound,
4 parse error, 5 precondition.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import caps
from .bounds import MuTable, bb_bound, bound_row, mu_indices
from .errors import CapacityError, LadderfiltError, ParseError
from .store import TABLE_HEADERS, Cache, TableStore

SKIPPED = "skipped(capacity)"
EXIT_CAPACITY, EXIT_INFEASIBLE, EXIT_PARSE = 2, 3, 4

SPACES = {"BB": ("IHX",), "B": ("IHX", "x")}


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def int_range(text: str) -> list:
    """``"5"`` or ``"2..8"`` (inclusive; a reversed range is empty)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


# ---------------------------------------------------------------- cell kernels
# Module-level so a process pool can pickle them.

def _dim_cell(m, u, space):
    from .relations import quotient_dim
    return quotient_dim(m, u, list(SPACES[space]))


def _filtration_cell(m, u):
    from .ladders import filtration_dims
    if m < 1 or u > 2 * m:
        return []
    return [[*t, F, G] for t, (F, G) in filtration_dims(m, u, ("IHX", "x")).items()]


def _mu_cell(m, u, o, e):
    from .feynman import mu
    return mu(m, u, o, e)


class Runner:
    """Evaluates cells through the cache, turning capacity failures into skips."""

    def __init__(self, cache: Cache, jobs: int = 1):
        self.cache = cache
        self.jobs = jobs
        self.skipped = 0

    def _one(self, command, params, fn):
        try:
            return self.cache.lookup(command, params, lambda: fn(**params))
        except (CapacityError, MemoryError) as exc:
            print(f"{command} {params}: {exc or 'out of memory'}", file=sys.stderr)
            self.skipped += 1
            return None, SKIPPED

    def run(self, command, cells, fn) -> list:
        """``[(params, value, provenance)]`` in the order of ``cells``."""
        if self.jobs <= 1 or len(cells) < 2:
            return [(p, *self._one(command, p, fn)) for p in cells]
        out = [None] * len(cells)
        todo = []
        for i, p in enumerate(cells):
            hit = self.cache.get(command, p)
            if hit is not None:
                out[i] = (p, hit, "cached")
            else:
                todo.append(i)
        with ProcessPoolExecutor(self.jobs) as pool:
            futs = {i: pool.submit(fn, **cells[i]) for i in todo}
            for i, fut in futs.items():
                try:
                    value = fut.result()
                except (CapacityError, MemoryError) as exc:
                    print(f"{command} {cells[i]}: {exc or 'out of memory'}", file=sys.stderr)
                    self.skipped += 1
                    out[i] = (cells[i], None, SKIPPED)
                    continue
                self.cache.put(command, cells[i], value)
                out[i] = (cells[i], value, "computed")
        return out


# ---------------------------------------------------------------- reporting

class Report:
    def __init__(self, name: str, fmt: str, store: TableStore | None):
        self.name = name
        self.fmt = fmt
        self.store = store
        self.header = TABLE_HEADERS[name].split(",")
        self.rows = []
        self.notes = []

    def add(self, *fields):
        self.rows.append(["" if f is None else str(f) for f in fields])

    def note(self, text):
        self.notes.append(text)

    def emit(self, out=None):
        out = sys.stdout if out is None else out
        if self.fmt == "rows":
            out.write("# " + ",".join(self.header) + "\n")
            for r in self.rows:
                out.write(",".join(r) + "\n")
        else:
            widths = [max([len(h)] + [len(r[i]) for r in self.rows]) for i, h in enumerate(self.header)]
            out.write("  ".join(h.rjust(w) for h, w in zip(self.header, widths)).rstrip() + "\n")
            for r in self.rows:
                out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")
        for n in self.notes:
            out.write(f"# {n}\n")
        if self.store is not None:
            # the table keeps where a value came from, not whether it was a cache hit
            rows = [r[:-1] + ["computed" if r[-1] == "cached" else r[-1]]
                    for r in self.rows if r[-1] != SKIPPED]
            self.store.append(self.name, [",".join(r) for r in rows])


# ---------------------------------------------------------------- commands

def cmd_dim(args, runner, report):
    cells = [{"m": m, "u": u, "space": args.space} for m in args.m for u in args.u]
    for p, value, prov in runner.run("dim", cells, _dim_cell):
        report.add(p["m"], p["u"], p["space"], value, prov)
    return 0


def cmd_filtration(args, runner, report):
    cells = [{"m": m, "u": u} for m in args.m for u in args.u]
    for p, value, prov in runner.run("filtration", cells, _filtration_cell):
        if value is None:
            report.add(p["m"], p["u"], None, None, None, None, None, prov)
            continue
        for f, o, e, F, G in value:
            report.add(p["m"], p["u"], f, o, e, F, G, prov)
    return 0


def _mu_cells(ms, u, o=None, e=None):
    cells = []
    for m in ms:
        for j, oo, ee in mu_indices(m, u):
            if j == m and (o is None or oo == o) and (e is None or ee == e):
                cells.append({"m": m, "u": u, "o": oo, "e": ee})
    return cells


def cmd_mu(args, runner, report):
    cells = _mu_cells(args.m, args.u, args.o, args.e)
    for p, value, prov in runner.run("mu", cells, _mu_cell):
        report.add(p["m"], p["u"], p["o"], p["e"], value, prov)
    return 0


def _mu_table(args, runner, m_max, u) -> tuple:
    """MuTable for the bound, whether any entry was skipped, and the worst provenance."""
    if args.mu != "computed":
        table = MuTable.load(args.mu)
        if args.assume_zero:
            for j, o, e in mu_indices(m_max, u):
                if (j, u, o, e) not in table.entries:
                    table.set(j, u, o, e, 0, "assumed-zero")
        return table, False, "assumed" if table.assumed() else "cached"
    table = MuTable()
    skipped = False
    worst = "cached"
    for p, value, prov in runner.run("mu", _mu_cells(range(u, m_max + 1), u), _mu_cell):
        if value is None:
            skipped = True
            continue
        if prov == "computed":
            worst = prov
        table.set(p["m"], u, p["o"], p["e"], value, "computed")
    return table, skipped, worst


def cmd_bound(args, runner, report):
    ms = [m for m in args.m if m >= args.u]
    if not ms:
        return 0
    table, skipped, mu_prov = _mu_table(args, runner, max(ms), args.u)
    code = 0
    for m in ms:
        if skipped:
            report.add(m, args.u, None, None, None, SKIPPED)
            continue
        bound = bb_bound(m, args.u, table)
        (_, exact, prov), = runner.run("dim", [{"m": m, "u": args.u, "space": "BB"}], _dim_cell)
        row = bound_row(m, args.u, bound, exact)
        report.add(*row.split(","), prov if mu_prov == "cached" else mu_prov)
        if exact is not None and bound < exact:
            report.note(f"infeasible: bound {bound} < exact {exact} at ({m},{args.u})")
            code = EXIT_INFEASIBLE
    assumed = table.assumed()
    if assumed:
        report.note("assumed-zero mu entries: " + " ".join(",".join(map(str, k)) for k in assumed))
    return code


def cmd_certify(args, runner, report):
    from .diagram import from_text
    from .weights import certify_nonzero
    path = Path(args.diagram)
    try:
        D = from_text(path.read_text())
    except OSError as exc:
        raise ParseError(str(exc), path=path) from None
    params = {"diagram": path.read_text()}
    value, prov = runner.cache.lookup("certify", params,
                                      lambda: (c.serialize() if (c := certify_nonzero(D)) else None))
    if value is None:
        report.add(None, None, None, None, "unknown")
    else:
        code, closure, algebra, coeffs = value.split()
        report.add(code, closure, algebra, coeffs.replace(",", " "), prov)
    return 0


def cmd_reproduce(args, runner, report):
    """Table entries, filtration triviality for u=2 and bound sharpness."""
    from .bounds import conjecture3
    from .diagram import parse
    from .weights import certify_nonzero
    out = report.out
    code = 0
    top = args.m_max

    def section(title):
        out.write(f"\n== {title}\n")

    section("table entries dim G(f,o,e)B(m,u)")
    rep = Report("filtration", args.format, report.store)
    for m, u, t in ((1, 0, (0, 0, 0)), (2, 2, (0, 0, 0)), (4, 4, (0, 0, 1)), (6, 4, (1, 0, 1))):
        if m > top:
            continue
        (_, value, prov), = runner.run("filtration", [{"m": m, "u": u}], _filtration_cell)
        if value is None:
            rep.add(m, u, *t, None, None, prov)
            continue
        for f, o, e, F, G in value:
            if (f, o, e) == t:
                rep.add(m, u, f, o, e, F, G, prov)
    rep.emit(out)

    section("weight-system certificates")
    rep = Report("certify", args.format, report.store)
    from .relations import quotient_basis
    for m, u in ((1, 0), (2, 2)):
        basis = quotient_basis(m, u, ["IHX", "x"])
        for c in sorted(basis):
            cert = certify_nonzero(parse(c))
            if cert is None:
                rep.add(c.hex(), None, None, None, "unknown")
            else:
                rep.add(cert.code, cert.closure, cert.algebra, " ".join(map(str, cert.coefficients)), "computed")
    rep.emit(out)

    section(f"filtration quotients of B(m,2), 3 <= m <= {top}")
    rep = Report("filtration", args.format, report.store)
    cells = [{"m": m, "u": 2} for m in range(3, top + 1)]
    nonzero = 0
    for p, value, prov in runner.run("filtration", cells, _filtration_cell):
        if value is None:
            rep.add(p["m"], 2, None, None, None, None, None, prov)
            continue
        for f, o, e, F, G in value:
            rep.add(p["m"], 2, f, o, e, F, G, prov)
            nonzero += G != 0
    rep.note(f"nonzero quotients: {nonzero}")
    rep.emit(out)

    section(f"bound sharpness for BB(m,2), 2 <= m <= {top}")
    rep = Report("bound", args.format, report.store)
    bargs = argparse.Namespace(m=list(range(2, top + 1)), u=2, mu="computed", assume_zero=False)
    code = max(code, cmd_bound(bargs, runner, rep))
    for row in rep.rows:
        if row[2]:
            rep.note(f"m={row[0]}: closed form {conjecture3(int(row[0]), 2)}")
    rep.emit(out)
    return code


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = Parser(prog="ladderfilt", description=__doc__.splitlines()[0])
    common = Parser(add_help=False)
    common.add_argument("--format", choices=("text", "rows"), default="text")
    common.add_argument("--cache-dir", help="defaults to $LADDERFILT_CACHE")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--schemas", help="schema corpus directory")
    common.add_argument("--max-generators", type=int, default=caps.MAX_GENERATORS)
    common.add_argument("--max-memory", type=int, default=caps.MAX_MEMORY, help="bytes")
    common.add_argument("--jobs", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[common], help="dimensions of BB(m,u) or B(m,u)")
    p.add_argument("--space", choices=tuple(SPACES), default="BB")
    p.add_argument("--m", type=int_range, required=True)
    p.add_argument("--u", type=int_range, required=True)

    p = sub.add_parser("filtration", parents=[common], help="dimensions of F_t and G_t")
    p.add_argument("--m", type=int_range, required=True)
    p.add_argument("--u", type=int_range, required=True)

    p = sub.add_parser("mu", parents=[common], help="mu values from Feynman graphs")
    p.add_argument("--m", type=int_range, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--o", type=int)
    p.add_argument("--e", type=int)

    p = sub.add_parser("bound", parents=[common], help="dimension bound against the exact value")
    p.add_argument("--m", type=int_range, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--mu", default="computed", help="'computed' or a mu table file")
    p.add_argument("--assume-zero", action="store_true",
                   help="treat mu entries missing from the file as zero (listed in the report)")

    p = sub.add_parser("certify", parents=[common], help="weight-system certificate for a diagram file")
    p.add_argument("diagram")

    p = sub.add_parser("reproduce", parents=[common], help="desk-scale reproduction of the main results")
    p.add_argument("--m-max", type=int, default=8)
    return ap


COMMANDS = {"dim": cmd_dim, "filtration": cmd_filtration, "mu": cmd_mu,
            "bound": cmd_bound, "certify": cmd_certify, "reproduce": cmd_reproduce}


def _limit_memory(nbytes):
    try:
        import resource
        soft, hard = resource.getrlimit(resource.RLIMIT_AS)
        if hard == resource.RLIM_INFINITY or nbytes < hard:
            resource.setrlimit(resource.RLIMIT_AS, (nbytes, hard))
    except (ImportError, ValueError, OSError):
        pass


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.schemas:
        import os
        os.environ["LADDERFILT_SCHEMAS"] = args.schemas
    if args.max_generators <= 0 or args.max_memory <= 0:
        print("caps must be positive", file=sys.stderr)
        return EXIT_PARSE
    caps.MAX_GENERATORS = args.max_generators
    _limit_memory(args.max_memory)
    try:
        cache = Cache(args.cache_dir, enabled=not args.no_cache, schemas=args.schemas)
        store = None if args.no_cache else TableStore(cache.root)
        runner = Runner(cache, args.jobs)
        name = {"reproduce": "bound"}.get(args.command, args.command)
        report = Report(name, args.format, store)
        report.out = sys.stdout
        code = COMMANDS[args.command](args, runner, report)
        if args.command != "reproduce":
            report.emit()
    except LadderfiltError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if runner.skipped:
        return max(code, EXIT_CAPACITY)
    return code


if __name__ == "__main__":
    sys.exit(main())
