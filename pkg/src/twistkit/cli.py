"""Command-line driver: `twistkit verify | compute | goldens`.

Exit codes: 0 pass, 1 a check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys

from . import gns as G
from . import prism as P
from . import reciprocity as RC
from . import sandwich as S
from . import suites
from .errors import TwistkitError
from .ring import Poly, divisors

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ------------------------------------------------------------ polynomials

_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b, ast.Mult: lambda a, b: a * b}


def parse_poly(text: str, var: str = "q") -> Poly:
    """Integer polynomial in one variable, e.g. "q^2 - 3*q + 1"; nothing else is evaluated."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return Poly.const(node.value, var)
        if isinstance(node, ast.Name):
            if node.id != var:
                raise UsageError(f"unknown symbol {node.id!r}; expected {var!r}")
            return Poly.gen(var)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = node.right
                if not (isinstance(e, ast.Constant) and type(e.value) is int and e.value >= 0):
                    raise UsageError("exponents must be non-negative integer literals")
                return walk(node.left) ** e.value
            op = _BINOPS.get(type(node.op))
            if op:
                return op(walk(node.left), walk(node.right))
        raise UsageError(f"cannot parse {text!r} as a polynomial in {var}")

    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc.msg}") from None
    return walk(tree)


# ----------------------------------------------------------------- verify


def build_config(args) -> suites.SuiteConfig:
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = suites.SuiteConfig.from_json(fh.read())
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"bad config {args.config}: {exc}") from None
    else:
        cfg = suites.SuiteConfig()
    if args.p is not None:
        cfg.primes = [args.p]
    for name in ("levels", "samples", "seed", "m", "n", "output"):
        val = getattr(args, name)
        if val is not None:
            setattr(cfg, name, val)
    if args.model is not None:
        if args.model not in P.MODELS:
            raise UsageError(f"unknown model {args.model!r}; choose from {', '.join(P.MODELS)}")
        cfg.models = [args.model]
    if args.spec is not None:
        cfg.gns_spec = args.spec
    if args.range is not None:
        cfg.gns_range = args.range
    if cfg.levels < 1 or cfg.samples < 1 or cfg.gns_range < 1:
        raise UsageError("levels, samples and range must be positive")
    return cfg


def cmd_verify(args) -> int:
    cfg = build_config(args)
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    report = suites.run_suites(names, cfg)
    if args.format == "markdown":
        text = suites.render_markdown(report)
    else:
        text = json.dumps(report, sort_keys=True, indent=1) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if suites.report_passed(report):
        return EXIT_PASS
    first = next(c for c in report["checks"] if c["status"] not in ("pass", "info"))
    sys.stderr.write("first failure: " + json.dumps(first, sort_keys=True) + "\n")
    return EXIT_FAIL


# ---------------------------------------------------------------- compute


def cmd_compute(args) -> int:
    if args.what == "twisted-power":
        s = G.builtin_gns(args.spec)
        x, y = parse_poly(args.x), parse_poly(args.y)
        out = {
            "n": args.n,
            "x": str(x),
            "y": str(y),
            "twisted_power": str(G.twisted_power(args.n, s)),
            "value": str(G.evaluate_twisted_power(args.n, s, x, y)),
        }
    elif args.what == "epsilon":
        pres = P.PrismPresentation(args.model, args.p)
        ctx = S.SandwichContext(pres, args.m, args.n)
        parts = [c for c in args.a.split(",") if c.strip()]
        if len(parts) != len(ctx.trunc):
            raise UsageError(f"--a needs {len(ctx.trunc)} comma-separated coordinates")
        a = ctx.source_vector([parse_poly(c, pres.var) for c in parts])
        out = {
            "model": args.model,
            "p": args.p,
            "m": args.m,
            "n": args.n,
            "a": [str(c.rep) for c in a.coords],
            "epsilon": [str(e.rep) for e in ctx.epsilon(a)],
        }
    else:
        s = G.builtin_gns(args.spec)
        f = parse_poly(args.f)
        w = G.gns_N(s, args.m, args.n, G.gns_transversal(s, f, args.n))
        out = {
            "m": args.m,
            "n": args.n,
            "f": str(f),
            "transversal": {str(d): str(c.rep) for d, c in zip(divisors(w.n), w.components)},
            "value": str(G.gns_from_transversal(w).rep),
        }
    sys.stdout.write(json.dumps(out, sort_keys=True, indent=1) + "\n")
    return EXIT_PASS


# ---------------------------------------------------------------- goldens


def cmd_goldens(args) -> int:
    """Compare (or with --update rewrite) the stored reciprocity rules, then the worked renders."""
    directory = RC.golden_dir()
    bad = []
    for expr in RC.golden_rules():
        name = RC.golden_name(expr)
        text = expr.to_json()
        path = directory / name
        if args.update:
            with open(str(path), "w") as fh:
                fh.write(text)
            continue
        try:
            stored = path.read_text()
        except FileNotFoundError:
            stored = None
        if stored != text:
            bad.append(name)
    rules = {RC.golden_name(e): e for e in RC.golden_rules()}
    for name, want in sorted(suites.WORKED_EXAMPLES.items()):
        if suites.normalize_render(rules[name].render()) != suites.normalize_render(want):
            bad.append(f"render:{name}")
    if G.render_norm(3, 2) != ("w_1^3", "w_2^3", "\\psi^3(w_1)", "\\psi^3(w_2)"):
        bad.append("norm_table:N^6_2")
    for name in bad:
        sys.stderr.write(f"mismatch: {name}\n")
    sys.stdout.write(f"{len(rules)} rules {'written' if args.update else 'checked'}, {len(bad)} mismatches\n")
    return EXIT_FAIL if bad else EXIT_PASS


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twistkit", description="Witt vector, prism and GNS verification harness")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=list(suites.SUITES) + ["all"])
    v.add_argument("--p", type=int)
    v.add_argument("--levels", type=int)
    v.add_argument("--model")
    v.add_argument("--m", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--spec", choices=["multiplicative", "q-analog", "additive", "hyperbolic"])
    v.add_argument("--range", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--config")
    v.add_argument("--output")
    v.add_argument("--format", choices=["json", "markdown"], default="json")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compute", help="evaluate one construction")
    c.add_argument("what", choices=["twisted-power", "epsilon", "norm"])
    c.add_argument("--x", default="q")
    c.add_argument("--y", default="1")
    c.add_argument("--f", default="q")
    c.add_argument("--a", default="0")
    c.add_argument("--m", type=int, default=1)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--p", type=int, default=2)
    c.add_argument("--model", choices=list(P.MODELS), default="q-de-rham")
    c.add_argument("--spec", choices=["multiplicative", "q-analog"], default="multiplicative")
    c.set_defaults(func=cmd_compute)

    g = sub.add_parser("goldens", help="check or rewrite the stored golden rules")
    g.add_argument("--update", action="store_true")
    g.set_defaults(func=cmd_goldens)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"twistkit: {exc}\n")
        return EXIT_USAGE
    except TwistkitError as exc:
        sys.stderr.write(f"twistkit: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
