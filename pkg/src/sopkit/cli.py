"""Command line front end: ``sop <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import circuits, dyadic
from .errors import SopError, StepLimitExceeded
from .rewrite import Strategy, reduce
from .term import SopTerm, fragment_of, interp, loads, term_to_json
from .zh import diagram_from_json, diagram_to_json, sop_to_zh, to_dot, zh_to_sop

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib


def load_strategy(path: str | None) -> Strategy | None:
    if path is None:
        return None
    text = Path(path).read_text()
    if path.endswith(".toml"):
        cfg = tomllib.loads(text)
    else:
        cfg = json.loads(text)
    return Strategy.from_config(cfg.get("strategy", cfg))


def _load_term(path: str) -> SopTerm:
    return loads(Path(path).read_text())


def _load_term_or_circuit(path: str) -> SopTerm:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return loads(text)
    return circuits.circuit_to_sop(circuits.parse_circuit(text))


def _emit_term(t: SopTerm, as_json: bool) -> None:
    print(json.dumps(term_to_json(t)) if as_json else str(t))


def cyclo_text(x) -> str:
    """Readable exact value, e.g. ``(w^1 - w^3)/2`` with w = e^(i pi/2^K)."""
    parts = []
    for j, c in enumerate(x.coeffs):
        if not c:
            continue
        mono = "" if j == 0 else ("w" if j == 1 else f"w^{j}")
        if mono:
            coef = "" if abs(c) == 1 else f"{abs(c)}*"
            body = coef + mono
        else:
            body = str(abs(c))
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    if x.e:
        s = f"({s})/{1 << x.e}" if len(parts) > 1 else f"{s}/{1 << x.e}"
    return s


# ------------------------------------------------------------ commands


def cmd_simplify(args) -> int:
    t = _load_term_or_circuit(args.file)
    strategy = load_strategy(args.strategy)
    code = 0
    try:
        out, steps = reduce(t, strategy)
    except StepLimitExceeded as exc:
        print(f"warning: {exc}", file=sys.stderr)
        out, steps, code = exc.term, exc.trace, 3
    if args.trace:
        Path(args.trace).write_text(json.dumps([s.to_json() for s in steps], indent=2) + "\n")
    if args.show_steps:
        for s in steps:
            print(s, file=sys.stderr)
    _emit_term(out, args.json)
    return code


def cmd_verify(args) -> int:
    c1 = circuits.parse_circuit(Path(args.c1).read_text())
    c2 = circuits.parse_circuit(Path(args.c2).read_text())
    v = circuits.verify(c1, c2, load_strategy(args.strategy), args.oracle_cap)
    print(v.status)
    if v.witness is not None:
        w = v.witness
        print(f"witness: row {w.row}, col {w.col}: {cyclo_text(w.left)} vs {cyclo_text(w.right)}")
    if not v.verified:
        print(f"reduced: {v.reduced}")
    if args.trace:
        Path(args.trace).write_text(json.dumps(v.trace, indent=2) + "\n")
    return v.exit_code


def cmd_interp(args) -> int:
    t = _load_term_or_circuit(args.file)
    m = interp(t, args.level)
    print(f"# level {m.level}, w = exp(i*pi/{1 << m.level})")
    rows, cols = m.shape
    for r in range(rows):
        print("  ".join(cyclo_text(m[r, c]) for c in range(cols)))
    return 0


def cmd_to_zh(args) -> int:
    d = sop_to_zh(_load_term(args.file))
    if args.dot:
        Path(args.dot).write_text(to_dot(d))
    print(json.dumps(diagram_to_json(d)))
    return 0


def cmd_from_zh(args) -> int:
    d = diagram_from_json(json.loads(Path(args.file).read_text()))
    _emit_term(zh_to_sop(d), True)
    return 0


def cmd_ascend(args) -> int:
    t = dyadic.ensure_primed(_load_term(args.file)) if args.prime else _load_term(args.file)
    _emit_term(dyadic.ascend(t, args.k), True)
    return 0


def cmd_descend(args) -> int:
    _emit_term(dyadic.descend(_load_term(args.file), args.k), True)
    return 0


def cmd_stats(args) -> int:
    t = _load_term_or_circuit(args.file)
    f = fragment_of(t)
    print(json.dumps({
        "variables": len(t.vars),
        "phase_monomials": len(t.phase.terms),
        "outputs": t.n_outputs,
        "inputs": t.n_inputs,
        "level": f.level,
        "primed": f.primed,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sop", description="Sum-over-paths terms and circuits")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simplify", help="reduce a term (JSON) or a circuit file")
    s.add_argument("file")
    s.add_argument("--strategy", help="JSON or TOML strategy config")
    s.add_argument("--trace", help="write the rewrite trace as JSON")
    s.add_argument("--json", action="store_true", help="print the result as JSON")
    s.add_argument("--show-steps", action="store_true", help="list steps on stderr")
    s.set_defaults(fn=cmd_simplify)

    s = sub.add_parser("verify", help="check two circuits for equality")
    s.add_argument("c1")
    s.add_argument("c2")
    s.add_argument("--oracle-cap", type=int, default=circuits.DEFAULT_ORACLE_CAP)
    s.add_argument("--strategy")
    s.add_argument("--trace")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("interp", help="exact matrix of a term")
    s.add_argument("file")
    s.add_argument("--level", type=int, default=None)
    s.set_defaults(fn=cmd_interp)

    s = sub.add_parser("to-zh", help="term JSON -> ZH diagram JSON")
    s.add_argument("file")
    s.add_argument("--dot")
    s.set_defaults(fn=cmd_to_zh)

    s = sub.add_parser("from-zh", help="ZH diagram JSON -> term JSON")
    s.add_argument("file")
    s.set_defaults(fn=cmd_from_zh)

    s = sub.add_parser("ascend")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--prime", action="store_true", help="apply ensure_primed first")
    s.set_defaults(fn=cmd_ascend)

    s = sub.add_parser("descend")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(fn=cmd_descend)

    s = sub.add_parser("stats")
    s.add_argument("file")
    s.set_defaults(fn=cmd_stats)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SopError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
