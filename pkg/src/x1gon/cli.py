"""Command-line interface: ``x1gon <command> [options]``.

Options are read from defaults, then an optional ``key=value`` config
file, then the ``X1GON_CACHE`` environment variable (cache directory
only), then command-line flags.  Exit codes: 0 success, 1 computation
error (the error class name is printed on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

from . import cache, gonality, modeq
from .cusps import divisor_table
from .errors import X1GonError
from .lattice import UnitLattice, class_group_quotient, search_min_degree, units_up_to_degree

__all__ = ["RunConfig", "load_config", "main", "run"]

OUTPUTS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by all commands."""

    cache_dir: str = None
    seed: int = 0
    lll_delta: Fraction = Fraction(99, 100)
    search_budget: int = 200
    precision_bits: int = 64
    output: str = "text"

    def validate(self):
        if not Fraction(1, 4) < self.lll_delta <= 1:
            raise ValueError("lll_delta must lie in (1/4, 1]")
        if self.search_budget < 1:
            raise ValueError("search_budget must be at least 1")
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.output not in OUTPUTS:
            raise ValueError(f"output must be one of {', '.join(OUTPUTS)}")
        return self


_CONVERT = {
    "cache_dir": str,
    "seed": int,
    "lll_delta": Fraction,
    "search_budget": int,
    "precision_bits": int,
    "output": str,
}


def load_config(path=None, overrides=None, environ=None):
    """Build a :class:`RunConfig` from a file, the environment and overrides."""
    environ = os.environ if environ is None else environ
    values = {}
    if path is not None:
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in _CONVERT:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONVERT[key](val)
    if "X1GON_CACHE" in environ:
        values["cache_dir"] = environ["X1GON_CACHE"]
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = _CONVERT[key](val)
    return RunConfig(**values).validate()


# ---------------------------------------------------------------------------
# cached computations


def _search(N, cfg):
    if N <= 3:
        return 1, ()
    key = f"N{N}-b{cfg.search_budget}-s{cfg.seed}-d{cfg.lll_delta.numerator}_{cfg.lll_delta.denominator}"
    hit = cache.load("search", key)
    if hit is not None:
        return hit["degree"], tuple(hit["exponents"])
    res = search_min_degree(UnitLattice.for_level(N), budget=cfg.search_budget, seed=cfg.seed,
                            delta=cfg.lll_delta)
    cache.store("search", key, {"degree": res.degree, "exponents": list(res.exponents)})
    return res.degree, tuple(res.exponents)


def _default_q(N):
    q = 2
    while N % q == 0 or not gonality.is_prime(q):
        q += 1
    return q


# ---------------------------------------------------------------------------
# rendering


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _dump_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _kv_text(pairs):
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


# ---------------------------------------------------------------------------
# commands


def cmd_equations(args, cfg):
    if args.all_units is not None:
        N = args.all_units
        rows = [[k, str(modeq.f_poly(k))] for k in range(2, N // 2 + 2)]
        if cfg.output == "json":
            return _dump_json({"N": N, "units": {str(k): f for k, f in rows}})
        if cfg.output == "csv":
            return _dump_csv(["k", "f_xy"], rows)
        return "".join(f"f_{k} = {f}\n" for k, f in rows)
    N = args.level
    if N < 4:
        raise gonality.UnsupportedLevel("modular equations start at N=4")
    out = {}
    if args.coords in (None, "bc"):
        out["F_bc"] = str(modeq.modular_equation_F(N))
    if args.coords in (None, "xy"):
        out["f_xy"] = str(modeq.f_poly(N))
    if cfg.output == "json":
        return _dump_json({"N": N, **out})
    if cfg.output == "csv":
        return _dump_csv(["N"] + list(out), [[N] + list(out.values())])
    names = {"F_bc": f"F_{N}(b,c)", "f_xy": f"f_{N}(x,y)"}
    return "".join(f"{names[k]} = {v}\n" for k, v in out.items())


def cmd_divisors(args, cfg):
    T = divisor_table(args.level)
    if cfg.output == "json":
        return _dump_json({"N": T.N, "weights": list(T.degrees()), "units": list(T.units),
                           "rows": [list(r) for r in T.rows]})
    if cfg.output == "csv":
        header = ["k"] + [f"C{n}" for n in range(T.N // 2 + 1)]
        return _dump_csv(header, [[k] + list(r) for k, r in zip(T.units, T.rows)])
    text = T.to_text()
    if args.out:
        cache.atomic_write_text(args.out, text)
    return text


def cmd_search(args, cfg):
    N = args.level
    degree, expo = _search(N, cfg)
    floor = None
    if args.certify_upto is not None:
        # complete enumeration below the requested degree: either nothing is
        # found, or the smallest degree found is the exact minimum
        found = units_up_to_degree(UnitLattice.for_level(N), args.certify_upto - 1)
        floor = min((v.degree for v in found), default=args.certify_upto)
    out = {"level": N, "degree": degree, "exponents": list(expo), "certified_floor": floor}
    if cfg.output == "json":
        return _dump_json(out)
    if cfg.output == "csv":
        return _dump_csv(["level", "degree", "exponents", "certified_floor"],
                         [[N, degree, " ".join(map(str, expo)), "" if floor is None else floor]])
    pairs = [("level", N), ("degree", degree), ("exponents", " ".join(map(str, expo)))]
    if floor is not None:
        pairs.append(("certified_floor", floor))
    return _kv_text(pairs)


def cmd_classgroup(args, cfg):
    factors, free = class_group_quotient(UnitLattice.for_level(args.level))
    if cfg.output == "json":
        return _dump_json({"N": args.level, "factors": factors, "free_rank": free})
    if cfg.output == "csv":
        return _dump_csv(["N", "factors", "free_rank"], [[args.level, " ".join(map(str, factors)), free]])
    parts = [f"Z/{d}" for d in factors] + (["Z^%d" % free] if free else [])
    return f"C1({args.level}) = {' x '.join(parts) if parts else '0'}\n"


def cmd_bounds(args, cfg):
    N = args.level
    rep = gonality.bounds(N, q=args.q, upper=_search(N, cfg))
    d = rep.to_dict()
    if cfg.output == "json":
        return _dump_json(d)
    if cfg.output == "csv":
        pig = rep.lower_pigeonhole[1] if rep.lower_pigeonhole else ""
        return _dump_csv(["N", "upper", "lower_ks", "lower_pigeonhole", "status"],
                         [[N, rep.upper, rep.lower_abramovich, pig, rep.status]])
    pairs = [("N", N), ("upper", rep.upper), ("exponents", " ".join(map(str, rep.exponents))),
             ("lower_ks", rep.lower_abramovich)]
    if rep.lower_pigeonhole:
        pairs.append((f"lower_pigeonhole(q={rep.lower_pigeonhole[0]})", rep.lower_pigeonhole[1]))
    pairs += [("status", rep.status), ("improvement", rep.improvement),
              ("level_class", gonality.level_class(N))]
    return _kv_text(pairs)


def cmd_census(args, cfg):
    c = gonality.count_places_fq(args.level, args.q, args.maxdeg)
    d = c.to_dict()
    if cfg.output == "json":
        return _dump_json(d)
    rows = [[k, c.count(k), c.cusp_counts.get(k, 0)] for k in range(1, c.max_degree + 1)]
    if cfg.output == "csv":
        return _dump_csv(["degree", "places", "cusp_places"], rows)
    head = f"X1({c.N}) over F_{c.q}: places of degree <= {c.max_degree}\n"
    return head + "".join(f"  degree {k:>2}: {n:>4} ({cc} cusp)\n" for k, n, cc in rows)


def cmd_plan(args, cfg):
    plan = gonality.plan_lower_bound(args.level, args.q, args.target, census_degree=args.maxdeg)
    text = plan.to_json() + "\n"
    if args.out:
        cache.atomic_write_text(args.out, text)
    if cfg.output == "json":
        return text
    lines = [f"plan: gon over F_{plan.q} of X1({plan.N}) > {plan.d}",
             f"rational places {plan.rational_places}, pigeonhole bound {plan.pigeonhole}"]
    lines += [f"note: {n}" for n in plan.notes]
    for case in plan.cases:
        lines.append(f"case {case.index} [{case.status}]: {case.condition}")
        if case.family:
            lines.append(f"  family: {case.family}")
        # case 2 rows follow the type order, case 3 rows the calculation order
        rows = (plan.table_rows(case.index) if case.index == 2
                else [(g.calc, g.types) for g in case.groups])
        for calc, ts in rows:
            lines.append(f"  {', '.join(t.short() for t in ts)} -> {calc}")
    lines.append(f"obligations: {plan.obligations}")
    return "\n".join(lines) + "\n"


def cmd_census_table(args, cfg):
    degrees = [int(s) for s in args.degrees.split(",")]
    rows = []
    for N in range(args.start, args.upto + 1):
        row = [N]
        for d in degrees:
            row.append(int(gonality.degree_d_unit_census(N, d).exists))
        rows.append(row)
    header = ["N"] + [f"d{d}" for d in degrees]
    if cfg.output == "json":
        return _dump_json({"degrees": degrees, "rows": {str(r[0]): r[1:] for r in rows}})
    if cfg.output == "csv":
        return _dump_csv(header, rows)
    lines = ["  ".join(f"{h:>3}" for h in header)]
    lines += ["  ".join(f"{v:>3}" for v in [r[0]] + ["yes" if x else "-" for x in r[1:]]) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_table1(args, cfg):
    rows = []
    for N in range(args.start, args.upto + 1):
        upper, expo = _search(N, cfg)
        pig = ""
        if N >= 10:
            q = _default_q(N)
            pig = gonality.pigeonhole_bound(q, gonality.count_places_fq(N, q, 1).count(1))
        try:
            value, exact = gonality.table1(N)
            status = "exact" if exact and value == upper else "bounded"
        except gonality.UnsupportedLevel:
            status = "bounded"
        rows.append([N, upper, gonality.abramovich_bound(N), pig, status])
    header = ["N", "upper", "lower_ks", "lower_pigeonhole", "status"]
    if cfg.output == "json":
        return _dump_json([dict(zip(header, r)) for r in rows])
    return _dump_csv(header, rows)


COMMANDS = {
    "equations": cmd_equations,
    "divisors": cmd_divisors,
    "search": cmd_search,
    "classgroup": cmd_classgroup,
    "bounds": cmd_bounds,
    "census": cmd_census,
    "plan": cmd_plan,
    "census-table": cmd_census_table,
    "table1": cmd_table1,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--seed", type=int)
    common.add_argument("--delta", dest="lll_delta", type=Fraction)
    common.add_argument("--budget", dest="search_budget", type=int)
    common.add_argument("--precision", dest="precision_bits", type=int)
    common.add_argument("--output", choices=OUTPUTS)
    common.add_argument("--json", action="store_const", const="json", dest="output")

    p = argparse.ArgumentParser(prog="x1gon", description="Gonality bounds for X1(N).")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    a = add("equations", "modular equation F_N and optimized f_N")
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--level", type=int)
    g.add_argument("--all-units", type=int, metavar="N", help="print f_2 .. f_{N/2+1}")
    a.add_argument("--coords", choices=("bc", "xy"))
    a = add("divisors", "divisor table of f_2 .. f_{N/2+1}")
    a.add_argument("--level", type=int, required=True)
    a.add_argument("--out")
    a = add("search", "lattice search for a unit of small degree")
    a.add_argument("--level", type=int, required=True)
    a.add_argument("--certify-upto", type=int)
    a = add("classgroup", "cuspidal class group modulo the unit lattice")
    a.add_argument("--level", type=int, required=True)
    a = add("bounds", "upper and lower gonality bounds")
    a.add_argument("--level", type=int, required=True)
    a.add_argument("--q", type=int)
    a = add("census", "places of small degree over F_q")
    a.add_argument("--level", type=int, required=True)
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--maxdeg", type=int, default=1)
    a = add("plan", "lower-bound proof plan over F_q")
    a.add_argument("--level", type=int, required=True)
    a.add_argument("--q", type=int, required=True)
    a.add_argument("--target", type=int, required=True)
    a.add_argument("--maxdeg", type=int, default=8)
    a.add_argument("--out")
    a = add("census-table", "existence of units of degree d")
    a.add_argument("--from", dest="start", type=int, default=10)
    a.add_argument("--upto", type=int, default=40)
    a.add_argument("--degrees", default="5,6,7,8")
    a = add("table1", "CSV of bounds in the layout of the published table")
    a.add_argument("--from", dest="start", type=int, default=1)
    a.add_argument("--upto", type=int, default=40)
    return p


def run(argv, stdout=None, stderr=None, environ=None):
    """Run one command; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {f.name: getattr(args, f.name, None) for f in fields(RunConfig)}
    try:
        cfg = load_config(args.config, overrides, environ)
    except (OSError, ValueError) as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    cache.set_cache_dir(cfg.cache_dir)
    try:
        text = COMMANDS[args.command](args, cfg)
    except (X1GonError, ValueError, ArithmeticError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1
    finally:
        cache.set_cache_dir(None)
    stdout.write(text)
    return 0


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
