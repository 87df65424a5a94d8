"""Command-line front end.

Exit codes: 0 answered, 1 usage or input error, 2 unknown within budget.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, is_dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import depth, halting_set, lamplighter, machines, profinite

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def fixture_path(name: str) -> Path:
    if not name.endswith(".tm"):
        name += ".tm"
    return Path(str(resources.files("profinite_lab") / "fixtures" / name))


def load_registry(paths: list[str] | None) -> machines.Registry:
    if not paths:
        raise UsageError("this command needs --registry <file>")
    resolved = []
    for p in paths:
        path = Path(p)
        if not path.exists():
            bundled = fixture_path(path.name)
            if not bundled.exists():
                raise UsageError(f"registry file not found: {p}")
            path = bundled
        resolved.append(path)
    return machines.Registry.from_files(resolved)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "unknown"
    return str(value)


def _record(obj, **extra) -> dict:
    """Flatten a dataclass result into ordered key/value pairs."""
    out = {}
    if is_dataclass(obj):
        out["kind"] = type(obj).__name__
        for f in fields(obj):
            out[f.name] = getattr(obj, f.name)
    out.update(extra)
    return out


class Report:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines = []

    def answer(self, result, record: dict | None = None) -> None:
        record = dict(record or {})
        if self.fmt == "tsv":
            keys = ["result"] + list(record)
            self.lines.append("\t".join(keys))
            self.lines.append("\t".join(_fmt(v) for v in [result, *record.values()]))
        else:
            self.lines.append(_fmt(result))
            self.lines.extend(f"{k}={_fmt(v)}" for k, v in record.items())

    def table(self, rows: list[dict]) -> None:
        if not rows:
            return
        keys = list(rows[0])
        if self.fmt == "tsv":
            self.lines.append("\t".join(keys))
            self.lines.extend("\t".join(_fmt(r[k]) for k in keys) for r in rows)
        else:
            for r in rows:
                self.lines.append(" ".join(f"{k}={_fmt(r[k])}" for k in keys))

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


# -- handlers: each returns an exit code ----------------------------------------


def cmd_metric(args, out: Report) -> int:
    op = args.op
    if op == "norm":
        out.answer(profinite.norm(int(args.values[0])))
    elif op == "dist":
        out.answer(profinite.dist(int(args.values[0]), int(args.values[1])))
    elif op == "theta":
        out.answer(profinite.theta(int(args.values[0])))
    elif op == "cball":
        out.answer(profinite.closed_ball(int(args.values[0]), int(args.values[1])))
    elif op == "oball":
        out.answer(profinite.open_ball(int(args.values[0]), Fraction(args.values[1])))
    return EXIT_OK


_METRIC_ARITY = {"norm": 1, "dist": 2, "theta": 1, "cball": 2, "oball": 2}


def cmd_machine(args, out: Report) -> int:
    if args.op == "validate":
        paths = args.files or args.registry
        registry = load_registry(paths)
        rows = []
        for i, m in enumerate(registry, start=1):
            audited = machines.audit_declared_status(m, args.budget)
            rows.append({
                "index": i,
                "name": m.name,
                "states": len(m.states),
                "declared": str(m.declared),
                "audit": "ok" if audited else "FAILED",
            })
        out.table(rows)
        return EXIT_OK if all(r["audit"] == "ok" for r in rows) else EXIT_ERROR
    registry = load_registry(args.registry)
    if len(args.files) != 1:
        raise UsageError("machine run needs exactly one machine name or index")
    key = args.files[0]
    n = int(key) if key.isdigit() else registry.index_of(key)
    status = machines.run_bounded(registry[n], args.budget)
    if isinstance(status, machines.Halted):
        out.answer("halted", {"machine": registry[n].name, "steps": status.steps})
        return EXIT_OK
    out.answer("running", {"machine": registry[n].name, "steps": status.budget})
    return EXIT_UNKNOWN


def _certificate_record(cert) -> dict:
    rec = _record(cert)
    return {"certificate" if k == "kind" else k: v for k, v in rec.items()}


def cmd_set(args, out: Report) -> int:
    hs = halting_set.HaltingSet(load_registry(args.registry))
    value = int(args.value)
    if args.op == "member":
        answer = hs.member_b(value)
        out.answer(answer.verdict, _certificate_record(answer.certificate))
        return EXIT_OK
    if args.op == "describe":
        desc = hs.describe_xn(value, args.budget)
        params = hs.xn_params(value)
        rec = {"n": value, "t": params.t, "m": params.modulus, "r": params.radius}
        if isinstance(desc, halting_set.Exact):
            rec.update(halting_step=desc.halting_step, y=desc.y, r_prime=desc.r_prime,
                       final_ball=desc.final_ball)
            kind = "exact"
        else:
            rec.update(steps=desc.steps)
            kind = "non-halting-so-far"
        for k, ball in desc.step_balls:
            rec[f"ball[{k}]"] = ball
        out.answer(kind, rec)
        return EXIT_OK
    result = hs.openness_witness(value, args.budget)
    if isinstance(result, halting_set.UnknownWithinBudget):
        out.answer("unknown", {"x": value, "budget": result.budget})
        return EXIT_UNKNOWN
    out.answer(result.modulus, {"x": value, "progression": profinite.Progression(value, result.modulus),
                                "verified": result.verified})
    return EXIT_OK


def cmd_group(args, out: Report) -> int:
    tokens = lamplighter.parse_word(" ".join(args.word))
    if args.op == "eval":
        out.answer(lamplighter.eval_factor(tokens))
        return EXIT_OK
    hs = halting_set.HaltingSet(load_registry(args.registry))
    group = lamplighter.Amalgam(hs.member_a)
    if args.op == "nf":
        nf = group.normal_form(tokens)
        out.answer(len(nf), {f"syllable[{i}]": s for i, s in enumerate(nf)})
    else:
        out.answer(group.is_trivial(tokens))
    return EXIT_OK


def _parse_schedule(text: str | None) -> list[int] | None:
    if text is None:
        return None
    return [int(v) for v in text.split(",") if v.strip()]


def cmd_depth(args, out: Report) -> int:
    hs = halting_set.HaltingSet(load_registry(args.registry))
    if args.op == "table":
        xs = [int(v) for v in args.values]
        rows = depth.depth_table(hs, xs, _parse_schedule(args.schedule), args.budget)
        out.table([{k: v for k, v in _record(r).items() if k != "kind"} for r in rows])
        return EXIT_UNKNOWN if any(r.certificate.startswith("unknown") for r in rows) else EXIT_OK
    if len(args.values) != 2:
        raise UsageError("depth quotient needs <x> <N>")
    x, modulus = (int(v) for v in args.values)
    verdict = depth.quotient_kill_shifts(hs, x, modulus, args.budget)
    if verdict is profinite.BUDGET_EXHAUSTED:
        out.answer("unknown", {"x": x, "N": modulus, "budget": args.budget})
        return EXIT_UNKNOWN
    label = "identity" if verdict.identity_in_quotient else "non-identity"
    rec = {"x": x, "N": modulus}
    if verdict.shift is not None:
        rec.update(k=verdict.shift, in_A=x + verdict.shift * modulus)
    out.answer(label, rec)
    return EXIT_OK


def cmd_demo(args, out: Report) -> int:
    hs = halting_set.HaltingSet(load_registry(args.registry))
    rows = []
    for n in range(1, len(hs.registry) + 1):
        params = hs.xn_params(n)
        machine = hs.registry[n]
        witness = hs.openness_witness(params.t, args.budget)
        row = {"n": n, "machine": machine.name, "t": params.t, "member": hs.member_b(params.t).verdict}
        if isinstance(witness, halting_set.Witness):
            # radius of the witnessed ball around t_n
            radius = profinite.dist(params.t, params.t + witness.modulus)
            bound = hs.halting_bound_from_certificate(n, radius)
            row.update(witness=witness.modulus, verified=witness.verified, radius=radius,
                       bound=bound, halts_before_bound=machines.halts_within(machine, bound - 1)
                       if machine.declared.kind != "loops" else "never")
        else:
            row.update(witness=None, verified=None, radius=None, bound=None, halts_before_bound=None)
        rows.append(row)
    out.table(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--registry", action="append", metavar="FILE",
                        help="machine file; repeat to concatenate registries")
    common.add_argument("--budget", type=int, default=10**4, help="simulation step budget")
    common.add_argument("--format", choices=("text", "tsv"), default="text")

    parser = _Parser(prog="profinite-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("metric", parents=[common], help="profinite metric on Z")
    p.add_argument("op", choices=sorted(_METRIC_ARITY))
    p.add_argument("values", nargs="+")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("machine", parents=[common], help="Turing machine registry")
    p.add_argument("op", choices=("validate", "run"))
    p.add_argument("files", nargs="*")
    p.set_defaults(func=cmd_machine)

    p = sub.add_parser("set", parents=[common], help="the set B and its complement A")
    p.add_argument("op", choices=("member", "describe", "witness"))
    p.add_argument("value")
    p.set_defaults(func=cmd_set)

    p = sub.add_parser("group", parents=[common], help="word problem in L(A)")
    p.add_argument("op", choices=("eval", "nf", "trivial"))
    p.add_argument("word", nargs="*")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("depth", parents=[common], help="depth-function experiments")
    p.add_argument("op", choices=("table", "quotient"))
    p.add_argument("values", nargs="+")
    p.add_argument("--schedule", help="comma-separated moduli (default: theta(s), s <= 20)")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("demo", parents=[common], help="non-effectiveness demonstration")
    p.add_argument("op", choices=("halting-bound",))
    p.set_defaults(func=cmd_demo)
    return parser


def run_cli(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "metric" and len(args.values) != _METRIC_ARITY[args.op]:
            raise UsageError(f"metric {args.op} takes {_METRIC_ARITY[args.op]} argument(s)")
        if args.budget < 0:
            raise UsageError("--budget must be nonnegative")
        report = Report(args.format)
        code = args.func(args, report)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        print(parser.format_usage().rstrip(), file=stderr)
        return EXIT_ERROR
    except (ValueError, IndexError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    stdout.write(report.text())
    return code


def main() -> None:
    sys.exit(run_cli())
