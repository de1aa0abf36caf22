"""Command-line front end: verify, search, lift, quotient, catalog, sweep, lint.

Exit codes: 0 success, 2 malformed input, 3 negative mathematical verdict
(verification, lint, lift refusal, or a failed sweep), 4 search budget
exhausted, 5 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cayley import build_cayley, generator_set, is_connected
from .certs import (
    CertificateError,
    emit_certificate,
    make_certificate,
    parse_certificate,
)
from .corpus import enumerate_groups, lint_corpus
from .groups import GroupError, check_element, generated_subgroup, group_order
from .hamilton import BudgetExceeded, find_hamiltonian_cycle
from .quotient import (
    LiftRefused,
    fgl_lift,
    make_quotient,
    verify_quotient_cycle,
    voltage,
)
from .spectext import format_element, format_group_spec, parse_element_text, parse_group_spec
from .strategies import SweepFailure, reproduce_order_150

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_BUDGET = 4
EXIT_INTERNAL = 5


class CommandFailure(Exception):
    """Carries the exit code and message for a failed subcommand."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail_parse(message: str) -> CommandFailure:
    return CommandFailure(EXIT_PARSE, message)


def _load_spec(text: str):
    try:
        return parse_group_spec(text)
    except GroupError as exc:
        raise _fail_parse(str(exc))


def _parse_symbols(spec, items):
    """name=element pairs, e.g. a=(1,(0,1)) or a=3 for cyclic groups."""
    symbols = []
    for item in items:
        name, eq, rest = item.partition("=")
        if not eq or not name:
            raise _fail_parse(f"generator {item!r} is not of the form name=element")
        try:
            el = parse_element_text(rest)
            check_element(spec, el)
        except GroupError as exc:
            raise _fail_parse(f"generator {item!r}: {exc}")
        symbols.append((name.strip(), el))
    if not symbols:
        raise _fail_parse("at least one generator is required")
    return tuple(symbols)


def _parse_elements(spec, items):
    out = []
    for item in items:
        try:
            el = parse_element_text(item)
            check_element(spec, el)
        except GroupError as exc:
            raise _fail_parse(f"element {item!r}: {exc}")
        out.append(el)
    if not out:
        raise _fail_parse("at least one element is required")
    return tuple(out)


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _fail_parse(f"cannot read {path}: {exc}")


def _load_certificate(path: str):
    try:
        return parse_certificate(_read_file(path))
    except CertificateError as exc:
        raise _fail_parse(f"{path}: {exc}")


def _cmd_verify(args) -> int:
    cert = _load_certificate(args.file)
    report = cert.verify()
    label = cert.figure_id or args.file
    if report.ok:
        print(f"ok {label}: {report.length} tokens, closed, all vertices distinct")
        return EXIT_OK
    step, reason = report.first_violation
    print(f"FAIL {label}: {reason} at step {step}")
    return EXIT_VERIFY


def _cmd_search(args) -> int:
    spec = _load_spec(args.group)
    symbols = _parse_symbols(spec, args.gens)
    gens = generator_set(spec, symbols)
    graph = build_cayley(spec, gens)
    if not is_connected(graph):
        print("no hamiltonian cycle: the generating set does not generate the group")
        return EXIT_VERIFY
    found = find_hamiltonian_cycle(graph, args.budget, parity_filter=args.parity_filter)
    if found is None:
        print("no hamiltonian cycle: search space exhausted")
        return EXIT_VERIFY
    cert = make_certificate(spec, symbols, found, provenance="search-fallback")
    text = emit_certificate(cert)
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def _quotient_context(spec, normal_items):
    members = _parse_elements(spec, normal_items)
    sub = generated_subgroup(spec, members)
    try:
        return make_quotient(spec, sub)
    except GroupError as exc:
        raise _fail_parse(str(exc))


def _cmd_lift(args) -> int:
    spec = _load_spec(args.group)
    cert = _load_certificate(args.cycle)
    if cert.spec != spec:
        raise _fail_parse(
            f"cycle file names group {format_group_spec(cert.spec)!r}, not {args.group!r}")
    ctx = _quotient_context(spec, args.normal)
    gens = generator_set(spec, cert.symbols)
    qrep = verify_quotient_cycle(ctx, cert.walk, gens)
    if not qrep.ok:
        step, reason = qrep.first_violation
        print(f"FAIL quotient cycle: {reason} at step {step}")
        return EXIT_VERIFY
    vres = voltage(ctx, cert.walk, gens)
    n = ctx.subgroup.order
    print(f"quotient: {ctx.num_cosets} cosets; voltage = {format_element(vres.element)}; "
          f"generates N of order {n}: {'yes' if vres.generates_N else 'no'}")
    try:
        lifted = fgl_lift(ctx, cert.walk, gens)
    except LiftRefused as exc:
        print(f"lift refused: {exc}")
        return EXIT_VERIFY
    text = emit_certificate(lifted)
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_quotient(args) -> int:
    spec = _load_spec(args.group)
    ctx = _quotient_context(spec, args.normal)
    n = ctx.subgroup.order
    k = ctx.num_cosets
    orders = sorted(int(ctx.table.order[ctx.table.index[m]]) for m in ctx.subgroup.members)
    cyclic = orders[-1] == n
    print(f"group: {format_group_spec(spec)} (order {group_order(spec)})")
    print(f"normal subgroup: order {n}, {'cyclic' if cyclic else 'not cyclic'}")
    print(f"cosets: {k}")
    for c in range(k):
        rep = ctx.table.elements[ctx.coset_reps[c]]
        print(f"  {c:3d}  {format_element(rep)}")
    if k <= 12:
        print("coset product table:")
        for row in ctx.quotient_mult:
            print("  " + " ".join(f"{int(v):3d}" for v in row))
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    try:
        entries = enumerate_groups(args.order)
    except GroupError as exc:
        raise _fail_parse(str(exc))
    for i, entry in enumerate(entries):
        shape = " ".join(f"{o}^{c}" if c > 1 else str(o) for o, c in entry.order_profile)
        print(f"{i + 1:2d}. {entry.name}")
        print(f"    |Z| = {entry.center_order}  |G'| = {entry.derived_order}  "
              f"{'abelian' if entry.abelian else 'nonabelian'}  orders: {shape}")
    print(f"total: {len(entries)} isomorphism classes of order {args.order}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    if args.order != 150:
        raise _fail_parse("the full sweep is implemented for order 150 only")
    progress = (lambda m: print(m, file=sys.stderr, flush=True)) if not args.quiet else None
    try:
        report = reproduce_order_150(budget=args.budget, jobs=args.jobs, progress=progress)
    except SweepFailure as exc:
        print(str(exc), file=sys.stderr)
        code = EXIT_BUDGET if isinstance(exc.cause, BudgetExceeded) else EXIT_VERIFY
        return code
    text = report.text() + "\n"
    if args.report:
        Path(args.report).write_text(text)
        print(f"wrote {args.report}")
    else:
        print(text, end="")
    if args.certs:
        outdir = Path(args.certs)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, record in enumerate(report.records):
            (outdir / f"{i:04d}-{record.cycle_hash}.cert").write_text(record.emitted)
        print(f"wrote {len(report.records)} certificates to {outdir}")
    return EXIT_OK


def _cmd_corpus_lint(args) -> int:
    reports = lint_corpus()
    bad = 0
    for rep in reports:
        if rep.ok:
            note = "; ".join(rep.problems) if rep.problems else "ok"
            print(f"ok   {rep.figure}: {note}")
        else:
            bad += 1
            print(f"FAIL {rep.figure}: " + "; ".join(rep.problems))
    print(f"{len(reports) - bad}/{len(reports)} certificates clean")
    return EXIT_OK if bad == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayleyham",
        description="Hamiltonian cycles in Cayley graphs of small finite groups.",
        epilog="exit codes: 0 ok, 2 parse, 3 verify-fail, 4 budget, 5 internal; "
               "CAYLEYHAM_BUDGET sets the default search budget",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("file", help="certificate file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="exact cycle search on Cay(G;S)")
    p.add_argument("--group", required=True, help='group spec, e.g. "Z6 ltimes Z25 via unit 1"')
    p.add_argument("--gens", required=True, nargs="+", metavar="NAME=EL",
                   help='generators, e.g. "a=(1,(0,1))" "b=(3,(0,0))"')
    p.add_argument("--budget", type=int, default=None, help="extension-step budget")
    p.add_argument("--parity-filter", default=None, metavar="NAME",
                   help="keep only cycles using this generator an odd number of times")
    p.add_argument("--output", default=None, help="write the certificate here")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("lift", help="voltage check and cyclic-lift of a quotient cycle")
    p.add_argument("--group", required=True, help="full group spec")
    p.add_argument("--normal", required=True, nargs="+", metavar="EL",
                   help="generators of the normal subgroup N")
    p.add_argument("--cycle", required=True,
                   help="certificate file whose tokens trace the quotient cycle")
    p.add_argument("--output", default=None, help="write the lifted certificate here")
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("quotient", help="coset table summary for G/N")
    p.add_argument("--group", required=True, help="full group spec")
    p.add_argument("--normal", required=True, nargs="+", metavar="EL",
                   help="generators of the normal subgroup N")
    p.set_defaults(func=_cmd_quotient)

    p = sub.add_parser("enumerate-groups", help="catalog of isomorphism classes")
    p.add_argument("--order", type=int, default=150)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("reproduce", help="full sweep: a verified cycle for every "
                                         "minimal generating set of every group")
    p.add_argument("--order", type=int, default=150)
    p.add_argument("--jobs", type=int, default=None, help="worker processes")
    p.add_argument("--budget", type=int, default=None, help="per-search budget")
    p.add_argument("--report", default=None, help="write the report here")
    p.add_argument("--certs", default=None, metavar="DIR",
                   help="write every produced certificate into DIR")
    p.add_argument("--quiet", action="store_true", help="suppress progress lines")
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("corpus-lint", help="re-verify the bundled certificates")
    p.set_defaults(func=_cmd_corpus_lint)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CommandFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to exit 5
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
