"""``tatekit`` command line: tate, ring, pd, shapiro, verify, resolve."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .catalog import catalog_primes, load_group, load_module, parse_subgroup, standard_module
from .completion import (
    completed_naive,
    completed_resolution_constr,
    completed_tate_farrell,
    eckmann_shapiro_compare,
    pd_detect,
)
from .errors import InputError, TatekitError, VerificationError
from .modrep import FiniteGroup, Module
from .products import ring_table
from .resolution import dump_resolution, resolution
from .verify import SUITES, run_suite

NAMED_MODULES = ("trivial", "regular", "random", "random2", "perm")


# --------------------------------------------------------------------------
# argument plumbing


def parse_degrees(text: str) -> tuple[int, int]:
    """``"lo..hi"`` (or a single integer) to an inclusive pair."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"cannot parse degree range {text!r}; expected lo..hi") from None
    if hi < lo:
        raise InputError(f"empty degree range {text!r}")
    return lo, hi


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse treats "-6..6" as an option; glue it onto its flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--degrees", "--from", "--to") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _group(args) -> FiniteGroup:
    if not args.group:
        raise InputError("--group is required")
    return load_group(args.group)


def _prime(args, group: FiniteGroup) -> int:
    if args.prime is not None:
        p = args.prime
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise InputError(f"{p} is not a prime")
        return p
    try:
        primes = catalog_primes(group.name)
    except InputError:
        primes = []
    if not primes:
        raise InputError("--prime is required")
    return primes[0]


def _module(choice: str | None, group: FiniteGroup, p: int, seed: int) -> Module:
    choice = choice or "trivial"
    if choice in NAMED_MODULES:
        return standard_module(group, p, choice, seed=seed)
    if Path(choice).suffix == ".json" or Path(choice).exists():
        return load_module(choice, group, p)
    raise InputError(f"unknown module {choice!r}; use {', '.join(NAMED_MODULES)} or a JSON file")


def _ordered_map(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _emit(fmt: str, payload: dict, tsv_header: list[str], tsv_rows: list[list], text: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    elif fmt == "tsv":
        print("\t".join(tsv_header))
        for row in tsv_rows:
            print("\t".join(str(v) for v in row))
    else:
        print(text)


# --------------------------------------------------------------------------
# commands


def cmd_tate(args) -> int:
    group = _group(args)
    p = _prime(args, group)
    a = _module(args.from_, group, p, args.seed)
    b = _module(args.to or args.module, group, p, args.seed)
    lo, hi = parse_degrees(args.degrees or "-4..4")
    window = args.window if args.window is not None else max(abs(lo), abs(hi)) + 4

    def row(n):
        dims = {
            "naive": completed_naive(a, b, n).dim,
            "resolution": completed_resolution_constr(a, b, n).dim,
            "tate_farrell": completed_tate_farrell(a, b, n, window).dim,
        }
        return n, dims, len(set(dims.values())) == 1

    rows = _ordered_map(row, range(lo, hi + 1), args.jobs)
    agree = all(ok for _, _, ok in rows)
    payload = {
        "group": group.name, "prime": p, "from": a.name or args.from_ or "trivial",
        "to": b.name or args.to or args.module or "trivial",
        "rows": [{"degree": n, **dims, "status": "AGREE" if ok else "DISAGREE"} for n, dims, ok in rows],
        "agree": agree,
    }
    header = ["degree", "naive", "resolution", "tate_farrell", "status"]
    table = [[n, d["naive"], d["resolution"], d["tate_farrell"], "AGREE" if ok else "DISAGREE"] for n, d, ok in rows]
    text = "\n".join(f"{r[0]:>6}  {r[1]:>5}  {r[2]:>10}  {r[3]:>12}  {r[4]}"
                     for r in [header] + table)
    _emit(args.format, payload, header, table, text)
    return 0 if agree else VerificationError.exit_code


def cmd_ring(args) -> int:
    group = _group(args)
    p = _prime(args, group)
    lo, hi = parse_degrees(args.degrees or "-4..4")
    table = ring_table(group, p, lo, hi, check=True)
    payload = table.to_json()
    payload["checks"] = table.checks
    prods = payload["products"]
    rows = [[e["a"], e["b"], " + ".join(f"{c}*{k}" if c != 1 else k for k, c in e["result"].items()) or "0"]
            for e in prods]
    lines = ["degree " + " ".join(f"{n:>3}" for n in range(lo, hi + 1)),
             "dim    " + " ".join(f"{table.dims[n]:>3}" for n in range(lo, hi + 1)),
             f"unit: {' + '.join(table.unit) or '(degree 0 not in range)'}"]
    lines += [f"{a} * {b} = {r}" for a, b, r in rows]
    _emit(args.format, payload, ["a", "b", "result"], rows, "\n".join(lines))
    return 0


def cmd_pd(args) -> int:
    group = _group(args)
    p = _prime(args, group)
    m = _module(args.module, group, p, args.seed)
    v = pd_detect(m)
    payload = {"group": group.name, "prime": p, "module_dim": m.dim, "verdict": v.verdict, "shift": v.shift}
    _emit(args.format, payload, ["group", "prime", "module_dim", "verdict"],
          [[group.name, p, m.dim, v.verdict]], f"projective dimension: {v.verdict}")
    return 0


def cmd_shapiro(args) -> int:
    group = _group(args)
    p = _prime(args, group)
    if not args.subgroup:
        raise InputError("--subgroup is required")
    h = parse_subgroup(group, args.subgroup)
    a = _module(args.from_, h.group, p, args.seed)
    b = _module(args.to or args.module, group, p, args.seed)
    lo, hi = parse_degrees(args.degrees or "-3..3")
    degrees = list(range(lo, hi + 1))

    def one(n):
        return eckmann_shapiro_compare(h, a, b, [n])

    reports = _ordered_map(one, degrees, args.jobs)
    rows = []
    for n, rep in zip(degrees, reports):
        ig, ih = rep.induced[n]
        cg, ch = rep.coinduced[n]
        rows.append([n, ig, ih, cg, ch, "EQUAL" if rep.equal else "DIFFER"])
    ok = all(r[-1] == "EQUAL" for r in rows)
    header = ["degree", "G_induced", "H_restricted", "G_coinduced", "H_restricted_co", "status"]
    payload = {"group": group.name, "subgroup": h.group.name, "prime": p,
               "rows": [dict(zip(header, r)) for r in rows], "equal": ok}
    text = "\n".join("  ".join(f"{v:>{len(hd)}}" for v, hd in zip(r, header)) for r in [header] + rows)
    _emit(args.format, payload, header, rows, text)
    return 0 if ok else VerificationError.exit_code


def cmd_verify(args) -> int:
    if not args.suite:
        raise InputError(f"--suite is required ({', '.join(SUITES)} or all)")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(name, seed=args.seed) for name in names]
    ok = all(r.passed for r in results)
    payload = {"passed": ok, "suites": [r.summary() for r in results]}
    rows, lines = [], []
    for r in results:
        extra = ", ".join(f"{v} {k}" for k, v in r.notes.items() if k != "rows")
        lines.append(f"{r.name}: {'PASS' if r.passed else 'FAIL'}" + (f" ({extra})" if extra else ""))
        for rep in r.reports:
            rows.append([r.name, rep.name, rep.checked, "PASS" if rep.passed else "FAIL"])
            lines.append(f"  {rep.name}: {'PASS' if rep.passed else 'FAIL'} ({rep.checked} checks)")
            for msg in rep.failures[:10]:
                lines.append(f"    counterexample: {msg}")
    _emit(args.format, payload, ["suite", "check", "checked", "status"], rows, "\n".join(lines))
    return 0 if ok else VerificationError.exit_code


def cmd_resolve(args) -> int:
    group = _group(args)
    p = _prime(args, group)
    m = _module(args.module, group, p, args.seed)
    length = args.length if args.length is not None else 5
    if length < 0:
        raise InputError("--length must be non-negative")
    res = resolution(m, minimal=args.minimal)
    # stop at the first vanishing syzygy: the resolution has finite length there
    stop = length
    for j in range(1, length + 1):
        if res.syzygy(j).dim == 0:
            stop = j - 1
            break
    data = json.loads(dump_resolution(res, stop))
    data["length"] = stop
    data["finite"] = stop < length or res.syzygy(stop + 1).dim == 0
    rows = [[j, r] for j, r in enumerate(data["ranks"])]
    text = "ranks: " + ", ".join(str(r) for r in data["ranks"])
    if data["finite"]:
        text += f"\nfinite resolution of length {stop}"
    if args.format == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        _emit(args.format, data, ["degree", "rank"], rows, text)
    return 0


COMMANDS = {
    "tate": cmd_tate,
    "ring": cmd_ring,
    "pd": cmd_pd,
    "shapiro": cmd_shapiro,
    "verify": cmd_verify,
    "resolve": cmd_resolve,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="catalog name (C2, V4, Q8, ...) or group JSON file")
    common.add_argument("--subgroup", help="C2 style name, G, or comma separated element indices")
    common.add_argument("--prime", type=int)
    common.add_argument("--module", help="trivial, regular, random, random2, perm or module JSON file")
    common.add_argument("--from", dest="from_", help="first (contravariant) argument, as --module")
    common.add_argument("--to", help="second (covariant) argument, as --module")
    common.add_argument("--degrees", help="inclusive range lo..hi")
    common.add_argument("--length", type=int)
    common.add_argument("--minimal", action="store_true", help="use minimal free covers")
    common.add_argument("--window", type=int, help="half-width of the complete resolution")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("json", "tsv", "text"), default="text")
    common.add_argument("--suite", help=f"{', '.join(SUITES)} or all")
    parser = argparse.ArgumentParser(prog="tatekit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=(fn.__doc__ or "").strip() or None)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:  # argparse usage errors count as input errors
        return 0 if exc.code == 0 else InputError.exit_code
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return InputError.exit_code
    try:
        return COMMANDS[args.command](args)
    except TatekitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
