"""Command-line front end.

Exit codes: 0 pass, 1 confirmed violation, 2 usage or config error,
3 inconclusive after the escalation ladder.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .exponents import (
    Exponent,
    ExponentVector,
    anps_min_schedule,
    bhhl_admissible,
    dsp_exponent,
    schedule_bayart,
    schedule_hl,
    schedule_inclusion,
    schedule_pellegrino,
)
from .experiments.config import ConfigError, ExperimentConfig, load_config
from .experiments.hl import compare_schedules
from .experiments.report import canonical_json, render_report, write_report
from .experiments.run import run_experiment
from .mforms import MultilinearForm, norm_alternating, norm_sign_enum, norm_svd_bilinear
from .tensor_io import load_tensor
from .tensor_norms import mixed_norm

EXIT_PASS, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
THEOREMS = ("inclusion", "bayart", "pellegrino", "hl", "dsp", "anps", "bhhl")
STATUS_CODES = {"pass": EXIT_PASS, "violation": EXIT_VIOLATION, "inconclusive": EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _float6(text: str) -> str | None:
    try:
        return "%.6g" % Fraction(text)
    except (ValueError, ZeroDivisionError):
        return None


def print_table(rows: list[dict], columns: list[str] | None = None, use_float: bool = False) -> str:
    """Aligned text table; exact strings stay exact unless ``use_float`` adds decimals."""
    if not rows:
        raise ValueError("print_table needs at least one row")
    columns = columns or list(rows[0])

    def cell(v) -> str:
        text = str(v)
        if use_float and isinstance(v, str) and "/" in text:
            dec = _float6(text)
            if dec is not None:
                text = f"{text} ({dec})"
        return text

    body = [[cell(r.get(c, "")) for c in columns] for r in rows]
    widths = [max(len(c), *(len(b[i]) for b in body)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(b, widths)).rstrip() for b in body]
    return "\n".join(lines) + "\n"


def _vec(text: str | None, m: int | None, name: str) -> ExponentVector:
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        return ExponentVector.parse(text, m)
    except ValueError as exc:
        raise UsageError(f"bad --{name}: {exc}") from exc


def _scalar(text: str | None, name: str) -> Exponent:
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        return Exponent(text)
    except ValueError as exc:
        raise UsageError(f"bad --{name}: {exc}") from exc


def _render_schedule(entries, use_float: bool) -> str:
    text = ", ".join(str(e) for e in entries)
    if use_float:
        text += "  [" + ", ".join("inf" if e.is_inf else "%.6g" % float(e) for e in entries) + "]"
    return text


def cmd_schedule(args, out) -> int:
    th = args.theorem
    if th == "bhhl":
        p = _vec(args.p, args.m, "p")
        s = _vec(args.s, len(p), "s")
        adm = bhhl_admissible(p, s)
        out.write(f"{'admissible' if adm.ok else 'not admissible'}: |1/s| = {adm.lhs}, bound = {adm.rhs}\n")
        for reason in adm.reasons:
            out.write(f"  {reason}\n")
        return EXIT_PASS
    if th == "pellegrino":
        if args.m is None:
            raise UsageError("--m is required for pellegrino")
        res = schedule_pellegrino(_scalar(args.r, "r"), _scalar(args.p, "p"), _scalar(args.q, "q"), args.m)
    elif th in ("inclusion", "bayart"):
        r = _scalar(args.r, "r")
        p = _vec(args.p, args.m, "p")
        q = _vec(args.q, len(p), "q")
        res = (schedule_inclusion if th == "inclusion" else schedule_bayart)(r, p, q)
    elif th == "hl":
        if args.m is None:
            raise UsageError("--m is required for hl")
        res = schedule_hl(args.m, _vec(args.p, args.m, "p"))
    elif th == "dsp":
        res = dsp_exponent(_vec(args.p, args.m, "p"))
    else:
        res = anps_min_schedule(_vec(args.p, args.m, "p"))
    if not res.hypothesis_ok:
        sys.stderr.write(f"hypotheses fail: {', '.join(res.violated_conditions)}\n")
        if res.s is None:
            return EXIT_USAGE
    out.write(_render_schedule(res.s, args.float) + "\n")
    return EXIT_PASS if res.hypothesis_ok else EXIT_USAGE


def cmd_mixed_norm(args, out) -> int:
    if not args.tensor:
        raise UsageError("--tensor is required")
    t = load_tensor(args.tensor)
    spec = _vec(args.p, t.ndim, "p")
    out.write("%.17g\n" % mixed_norm(t, spec))
    return EXIT_PASS


def cmd_mform_norm(args, out) -> int:
    if not args.tensor:
        raise UsageError("--tensor is required")
    coeffs = load_tensor(args.tensor)
    p = _vec(args.p if args.p else "inf", coeffs.ndim, "p")
    T = MultilinearForm(coeffs, p, args.field or "")
    method = args.method
    if method == "sign_enum":
        est = norm_sign_enum(T)
    elif method == "svd":
        est = norm_svd_bilinear(T)
    else:
        est = norm_alternating(T, restarts=args.restarts or 20, tol=1e-10 if args.tol is None else args.tol,
                               max_iters=args.max_iters or 500, seed=args.seed or 0)
    out.write("%.17g  (%s)\n" % (est.value, est.method))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(est.to_json()) + "\n")
    return EXIT_PASS


_CONFIG_FLAGS = ("m", "dims", "field", "family", "trials", "seed", "r", "p", "q", "domain", "restarts", "tol",
                 "max_iters", "samples", "tensor", "kernel")


def effective_config(args, kind: str) -> ExperimentConfig:
    """Config file values merged with explicit flags; flags win."""
    data = load_config(args.config) if args.config else {}
    if data.get("kind", kind) != kind:
        raise ConfigError(f"config kind {data['kind']!r} does not match subcommand ({kind})")
    data["kind"] = kind
    for name in _CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if isinstance(data.get("dims"), str):
        try:
            data["dims"] = [int(x) for x in data["dims"].split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad --dims {data['dims']!r}") from exc
    return ExperimentConfig.from_dict(data)


def cmd_experiment(kind: str):
    def run(args, out) -> int:
        cfg = effective_config(args, kind)
        report = run_experiment(cfg)
        fmt = args.format or "json"
        if args.out:
            write_report(report, args.out, fmt)
            sys.stderr.write(f"{kind}: {report.status}; report written to {args.out}\n")
        else:
            out.write(render_report(report, fmt))
        return STATUS_CODES.get(report.status, EXIT_PASS)
    return run


def cmd_compare(args, out) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    table = compare_schedules(args.m, _vec(args.p, None, "p"))
    cols = ["k", "hl", "dsp", "anps", "hl<=dsp", "anps<=hl"]
    out.write(print_table(table.rows, cols, use_float=args.float))
    for name, reasons in table.hypotheses.items():
        if reasons:
            out.write(f"{name}: hypotheses fail ({', '.join(reasons)})\n")
    if args.out:
        cfg = ExperimentConfig(kind="exponent_table", m=args.m, p=args.p)
        write_report(run_experiment(cfg), args.out, args.format or "json")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hlgauge", description="Exact summing exponents and Hardy-Littlewood checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, *names):
        for name in names:
            if name == "m":
                sp.add_argument("--m", type=int)
            elif name == "float":
                sp.add_argument("--float", action="store_true", help="also show decimals (6 significant digits)")
            elif name in ("trials", "seed", "restarts", "samples", "max-iters"):
                sp.add_argument(f"--{name}", type=int)
            elif name == "tol":
                sp.add_argument("--tol", type=float)
            elif name == "format":
                sp.add_argument("--format", choices=("json", "csv"))
            elif name == "field":
                sp.add_argument("--field", choices=("real", "complex"))
            elif name == "family":
                sp.add_argument("--family", choices=("rademacher", "gaussian", "rank_one", "custom"))
            else:
                sp.add_argument(f"--{name}")

    sp = sub.add_parser("schedule", help="exact exponent schedules")
    sp.add_argument("--theorem", choices=THEOREMS, required=True)
    common(sp, "m", "r", "p", "q", "s", "float")
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("mixed-norm", help="mixed l_p norm of a tensor file")
    common(sp, "tensor", "p")
    sp.set_defaults(func=cmd_mixed_norm)

    sp = sub.add_parser("mform-norm", help="operator norm of a multilinear form")
    common(sp, "tensor", "p", "field", "restarts", "tol", "max-iters", "seed", "out")
    sp.add_argument("--method", choices=("alternating", "sign_enum", "svd"), default="alternating")
    sp.set_defaults(func=cmd_mform_norm)

    exp_flags = ("config", "m", "dims", "field", "family", "trials", "seed", "r", "p", "q", "domain", "restarts",
                 "tol", "max-iters", "samples", "tensor", "kernel", "out", "format")
    for name, kind in (("hl-verify", "hl_verify"), ("inclusion-demo", "inclusion_demo"),
                       ("regularity-probe", "regularity_probe")):
        sp = sub.add_parser(name, help=f"run the {kind} experiment")
        common(sp, *exp_flags)
        sp.set_defaults(func=cmd_experiment(kind))

    sp = sub.add_parser("compare", help="anisotropic vs isotropic vs minimal schedules")
    common(sp, "m", "p", "float", "out", "format")
    sp.set_defaults(func=cmd_compare)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (ConfigError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
