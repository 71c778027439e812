"""Command-line entry point: ``quadtourn <group> <command> [options]``.

Exit status: 0 when the command ran (whatever the predicate's truth),
2 for bad input, 3 when a size cap or the long-run guard blocks the run.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from quadtourn import enumeration as en
from quadtourn import ortho, quad, reports, sampling
from quadtourn import tournament as tm
from quadtourn.pattern import PatternError, PatternMatrix, parse_pat, pattern_of
from quadtourn.quad import CapExceeded

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 2, 3


class InputError(ValueError):
    pass


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _tournament(args) -> tm.Tournament:
    return tm.parse_trn(_read_text(args.input))


def _pattern(args) -> PatternMatrix:
    if getattr(args, "builtin", None) == "m15":
        return ortho.m15_pattern()
    text = _read_text(args.input)
    if args.input and args.input.endswith(".trn"):
        return pattern_of(tm.parse_trn(text))
    return parse_pat(text)


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {s!r}") from exc


# gen -----------------------------------------------------------------------------


def cmd_gen(args) -> tuple[dict, str | None]:
    kind = args.kind
    if kind == "rotational":
        t = tm.rotational_from(args.n, _int_list(args.symbol))
    elif kind == "qr":
        t = tm.qr_tournament(args.p)
    elif kind == "compose":
        outer = tm.parse_trn(_read_text(args.outer))
        parts = [tm.parse_trn(_read_text(p)) for p in args.parts.split(",")]
        t = tm.compose(outer, parts)
    elif kind == "transmitter":
        t = tm.add_transmitter(_tournament(args))
    elif kind == "receiver":
        t = tm.add_receiver(_tournament(args))
    else:
        t = tm.random_tournament(args.n, args.seed)
    return {"n": t.n, "arc_bits": t.arc_bits()}, t.to_trn()


# check ---------------------------------------------------------------------------


def cmd_check(args) -> tuple[dict, None]:
    kind = args.kind
    if kind == "pattern":
        ok, w = quad.pattern_combinatorially_orthogonal(_pattern(args))
        return {"combinatorially_orthogonal": ok, "witness": list(w) if w else None}, None
    if kind == "rotsym" and args.symbol is not None:
        if args.n is None:
            raise InputError("--symbol needs --n")
        n, sym = args.n, _int_list(args.symbol)
    elif kind == "rotsym":
        t = _tournament(args)
        sym = t.out_set(0).to_list()
        n = t.n
        if t != tm.rotational_from(n, sym):
            raise InputError("input tournament is not rotational")
    else:
        t = _tournament(args)
    if kind == "quad":
        return reports.quad_payload(quad.quadrangularity(t)), None
    if kind == "strongquad":
        return reports.strong_payload(quad.is_strongly_quadrangular(t, cap=args.cap)), None
    if kind == "domination":
        return reports.domination_payload(quad.domination_number(t)), None
    crit = quad.rotational_quadrangular(tm.RotationalSymbol(n, frozenset(sym)))
    return reports.rotational_payload(crit, n, sym), None


# enum ----------------------------------------------------------------------------


def cmd_enum(args) -> tuple[dict, None]:
    long_run = args.long
    kind = args.kind
    if kind in ("census", "quadcount"):
        if args.n >= en.LONG_ORDER and long_run:
            en.class_table(args.n, long_run=True, threads=args.threads, workdir=args.checkpoint)
        summary = en.enumerate_classes(args.n, long_run=long_run)
        payload = reports.summary_payload(summary)
        if kind == "quadcount":
            _, count, reps = en.count_quadrangular(args.n, long_run)
            payload.update(filter_name="quadrangular", filter_count=count,
                           representatives=[r.arc_bits() for r in reps])
        if args.out_census:
            en.write_census(args.n, args.out_census, long_run, only_quadrangular=kind == "quadcount")
        return payload, None
    if kind == "order2":
        bad = en.order2_exceptions()
        return {"holds": not bad, "exceptions": [t.arc_bits() for t in bad]}, None
    if kind == "order3":
        out_bad, in_bad = en.order3_exceptions()
        return {"holds": not out_bad and not in_bad,
                "out_exceptions": [t.arc_bits() for t in out_bad],
                "in_exceptions": [t.arc_bits() for t in in_bad]}, None
    if kind == "gamma3":
        found = en.gamma3_classes()
        return {"holds": en.verify_unique_gamma3(), "classes": [t.arc_bits() for t in found]}, None
    n_max = args.n_max
    if n_max >= en.LONG_ORDER and long_run:
        en.class_table(n_max, long_run=True, threads=args.threads, workdir=args.checkpoint)
    rows, holds = [], True
    for n in range(1, n_max + 1):
        for e in en.final_theorem_report(n, long_run):
            rows.append({"n": n, "arc_bits": e.tournament.arc_bits(), "reason": e.reason, "detail": e.detail})
            if e.reason == "survivor" and not e.tournament.is_isomorphic(tm.three_cycle()):
                holds = False
    return {"holds": holds, "n_max": n_max, "candidates": rows}, None


# sample / ortho -----------------------------------------------------------------------


def cmd_sample(args) -> tuple[dict, None]:
    if args.kind == "estimate":
        return sampling.estimate_nonquad(args.n, args.trials, args.seed, args.threads).row(), None
    curve = sampling.bound_curve(args.n_min, args.n_max)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("n,bound\n")
            fh.writelines(f"{n},{b!r}\n" for n, b in curve)
    return {"curve": [[n, b] for n, b in curve]}, None


def cmd_ortho(args) -> tuple[dict, None]:
    p = _pattern(args)
    if args.kind == "search":
        cfg = ortho.OrthoConfig(restarts=args.restarts, seed=args.seed, threads=args.threads,
                                max_iter=args.max_iter)
        return reports.ortho_payload(ortho.alternating_projection(p, cfg)), None
    return reports.certificate_payload(ortho.ratio_propagation_certificate(p, args.depth)), None


# parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadtourn", description=__doc__.splitlines()[0])
    groups = ap.add_subparsers(dest="group", required=True)

    def common(p):
        p.add_argument("--in", dest="input", help="input file (default: stdin)")
        p.add_argument("--out", help="write the report (or generated .trn) here")
        p.add_argument("--threads", type=int, default=1)

    g = groups.add_parser("gen", help="construct a tournament (.trn on stdout)")
    g.add_argument("kind", choices=["rotational", "qr", "compose", "transmitter", "receiver", "random"])
    common(g)
    g.add_argument("--n", type=int)
    g.add_argument("--symbol")
    g.add_argument("--p", type=int)
    g.add_argument("--outer")
    g.add_argument("--parts")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--report", help="also write a JSON report here")

    c = groups.add_parser("check", help="evaluate a predicate on one input")
    c.add_argument("kind", choices=["quad", "strongquad", "domination", "rotsym", "pattern"])
    common(c)
    c.add_argument("--cap", type=int, default=quad.DEFAULT_STRONG_CAP)
    c.add_argument("--n", type=int)
    c.add_argument("--symbol")
    c.add_argument("--builtin", choices=["m15"])

    e = groups.add_parser("enum", help="exhaustive sweeps over isomorphism classes")
    e.add_argument("kind", choices=["census", "quadcount", "order2", "order3", "gamma3", "final10"])
    common(e)
    e.add_argument("--n", type=int, default=7)
    e.add_argument("--n-max", type=int, default=9)
    e.add_argument("--census", dest="out_census", help="stream .trn representatives here")
    e.add_argument("--checkpoint", help="shard directory for resumable order-10 runs")
    e.add_argument("--i-know-this-is-long", dest="long", action="store_true")

    s = groups.add_parser("sample", help="Monte Carlo estimate and analytic bound")
    s.add_argument("kind", choices=["estimate", "bound"])
    common(s)
    s.add_argument("--n", type=int, default=40)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n-min", type=int, default=4)
    s.add_argument("--n-max", type=int, default=60)
    s.add_argument("--csv")

    o = groups.add_parser("ortho", help="orthogonal realization search / refutation")
    o.add_argument("kind", choices=["search", "certificate"])
    common(o)
    o.add_argument("--builtin", choices=["m15"])
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--restarts", type=int, default=100)
    o.add_argument("--max-iter", type=int, default=10_000)
    o.add_argument("--depth", type=int, default=4)
    return ap


HANDLERS = {"gen": cmd_gen, "check": cmd_check, "enum": cmd_enum, "sample": cmd_sample, "ortho": cmd_ortho}


def run(argv: list[str]) -> tuple[int, reports.RunReport | None, str | None]:
    """Execute ``argv``; returns (exit code, report, extra stdout text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_INPUT), None, None
    files = {}
    for attr in ("input", "outer"):
        path = getattr(args, attr, None)
        if path and path != "-" and Path(path).exists():
            files[path] = reports.file_digest(path)
    start = time.perf_counter()
    try:
        payload, text = HANDLERS[args.group](args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP, None, None
    except (InputError, tm.TournamentError, PatternError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None, None
    report = reports.RunReport(
        command=f"{args.group} {args.kind}",
        inputs={"argv": list(argv), "files": files},
        outcome=payload,
        elapsed=time.perf_counter() - start,
    )
    return EXIT_OK, report, text


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, report, text = run(argv)
    if report is None:
        return code
    out = getattr(build_parser().parse_args(argv), "out", None)
    if report.command.startswith("gen"):
        args = build_parser().parse_args(argv)
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
        if args.report:
            Path(args.report).write_text(report.to_json() + "\n")
        return code
    if out:
        Path(out).write_text(report.to_json() + "\n")
    else:
        print(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
