"""Command-line front end.

::

    srgraph compile PROGRAM [-o FILE]
    srgraph eval PROGRAM --args "s(0), c(eps,eps);"
    srgraph trace PROGRAM --args ... [--csv FILE] [--dot-dir DIR]
    srgraph check PROGRAM [--suite grs|ptas|trace|all] [--args ...]
    srgraph sweep PROGRAM --template "s^{m}(0), c(eps,eps);" --m 1..10

``PROGRAM`` is a program file or the word ``example`` for the built-in
example. Exit status: 0 success, 1 a check failed or a limit was hit,
2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from .graph import basic_graph, normal_union_size, term_size
from .order import Precedence, PrecedenceError, bound_G, parse_precedence
from .pint import pint
from .rewriting import STRATEGIES, reduce
from .safe_recursion import (EXAMPLE_PROGRAM, CompileError, CompiledProgram, DSLError,
                             StepLimitExceeded, Stuck, compile_source, direct_interpreter,
                             evaluate)
from .terms import ParseError, format_term, parse_term
from .textio import format_rule, to_dot
from .unfolding import format_spec
from .verification import (check_program_trace, check_ptas, check_safe_recursive_grs,
                           normalized_precedence)

log = logging.getLogger("srgraph")

OUT_ENV = "SRGRAPH_OUT"


class UsageError(ValueError):
    pass


# --- inputs -----------------------------------------------------------------------

def load_source(spec: str) -> str:
    if spec == "example":
        return EXAMPLE_PROGRAM
    try:
        return Path(spec).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {spec}: {e.strerror}") from None


_POWER = re.compile(r"([A-Za-z0-9_']+)\^(\d+)\(")


def expand_template(text: str, m: Optional[int] = None) -> str:
    """Substitute ``{m}`` and unfold powers: ``s^3(0)`` becomes ``s(s(s(0)))``."""
    if m is not None:
        text = text.replace("{m}", str(m))
    while True:
        hit = _POWER.search(text)
        if hit is None:
            return text
        depth, i = 1, hit.end()
        while i < len(text) and depth:
            depth += {"(": 1, ")": -1}.get(text[i], 0)
            i += 1
        if depth:
            raise ParseError(f"unbalanced parentheses in {text!r}")
        inner = text[hit.end():i - 1]
        name, n = hit.group(1), int(hit.group(2))
        text = text[:hit.start()] + f"{name}(" * n + inner + ")" * n + text[i:]


def _split_top(text: str, sep: str) -> List[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_args_text(text: str, cp: CompiledProgram, m: Optional[int] = None) -> tuple:
    """``"n1, n2; s1"`` into normal and safe constructor terms."""
    text = expand_template(text, m)
    parts = _split_top(text, ";")
    if len(parts) > 2:
        raise ParseError(f"more than one ';' in {text!r}")
    sig = {c.name: c for c in cp.constructors}
    out = []
    for part in parts + [""] * (2 - len(parts)):
        terms = [p.strip() for p in _split_top(part, ",") if p.strip()]
        out.append([parse_term(t, sig) for t in terms])
    normals, safes = out
    main = cp.main
    k, l = cp.program.defs[cp.program.main].k, cp.program.defs[cp.program.main].l
    if (len(normals), len(safes)) != (k, l):
        raise UsageError(f"{main.name} takes {k} normal and {l} safe arguments, "
                         f"got {len(normals)} and {len(safes)}")
    return normals, safes


def out_dir(explicit: Optional[str] = None) -> Optional[Path]:
    d = explicit or os.environ.get(OUT_ENV)
    if not d:
        return None
    p = Path(d)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _precedence(cp: CompiledProgram, path: Optional[str]) -> Precedence:
    if not path:
        return cp.precedence
    try:
        return parse_precedence(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


# --- commands ------------------------------------------------------------------

def format_compiled(cp: CompiledProgram) -> str:
    lines = [f"# main {cp.main.name}", f"# d {cp.d}", "", "# precedence"]
    lines += cp.precedence.format_cover().splitlines()
    lines += ["", "# families"]
    lines += [format_spec(s) for s in cp.provider.families]
    lines += ["", "# rules"]
    for r in cp.provider.rules:
        lines.append(format_rule(r))
    return "\n".join(lines).rstrip() + "\n"


def cmd_compile(a) -> int:
    cp = compile_source(load_source(a.program))
    text = format_compiled(cp)
    if a.output:
        Path(a.output).write_text(text)
    elif out_dir():
        stem = "example" if a.program == "example" else Path(a.program).stem
        (out_dir() / f"{stem}.grs").write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_eval(a) -> int:
    cp = compile_source(load_source(a.program))
    normals, safes = parse_args_text(a.args, cp)
    try:
        t = evaluate(cp, normals, safes, strategy=a.strategy, step_limit=a.step_limit, seed=a.seed)
    except StepLimitExceeded as e:
        print(f"step limit reached after {e.reduction.steps} steps", file=sys.stderr)
        return 1
    except Stuck as e:
        print(f"no constructor normal form: {e}", file=sys.stderr)
        return 1
    print(format_term(t))
    if a.oracle:
        want = direct_interpreter(cp.program, normals, safes)
        same = want is t
        print(f"interpreter: {'agrees' if same else 'DISAGREES'}")
        return 0 if same else 1
    return 0


def cmd_trace(a) -> int:
    cp = compile_source(load_source(a.program))
    normals, safes = parse_args_text(a.args, cp)
    g0 = basic_graph(cp.main, normals, safes)
    red = reduce(g0, cp.provider, a.strategy, a.step_limit, a.seed,
                 keep_snapshots=bool(a.dot_dir))
    target = a.csv
    if target is None and out_dir():
        target = str(out_dir() / "trace.csv")
    if target:
        red.trace.write_csv(target)
    else:
        red.trace.write_csv(sys.stdout)
    if a.dot_dir:
        d = Path(a.dot_dir)
        d.mkdir(parents=True, exist_ok=True)
        for s in red.trace.steps:
            (d / f"step{s.step:05d}.dot").write_text(to_dot(s.graph, name=f"step{s.step}"))
    if not red.normal:
        print(f"step limit {a.step_limit} reached", file=sys.stderr)
        return 1
    return 0


def cmd_check(a) -> int:
    cp = compile_source(load_source(a.program))
    prec = _precedence(cp, a.prec)
    suites = ["grs", "ptas", "trace"] if a.suite == "all" else [a.suite]
    failed = False
    for suite in suites:
        if suite == "grs":
            rep = check_safe_recursive_grs(cp.provider, max_skeleton=a.max_skeleton)
            print(rep.format(), end="")
        elif suite == "ptas":
            rep = check_ptas(cp.provider, prec, max_skeleton=min(a.max_skeleton, 5))
            print(rep.format(), end="")
        else:
            if not a.args:
                if a.suite == "trace":
                    raise UsageError("the trace suite needs --args")
                print("[trace] skipped: no --args given")
                continue
            normals, safes = parse_args_text(a.args, cp)
            rep = check_program_trace(cp, normals, safes, prec=prec, strategy=a.strategy,
                                      step_limit=a.step_limit, seed=a.seed,
                                      ell_override=a.ell_override, naive=a.naive_pint,
                                      reading=a.clause1_reading)
            status = "PASS" if rep.ok else "FAIL"
            print(f"[trace] {status}: {rep.summary()}")
            for v in rep.violations[:20]:
                print(f"  {v}")
        failed = failed or not rep.ok
    return 1 if failed else 0


def _parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.|-)\s*(\d+)\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
    elif text.strip().isdigit():
        lo = hi = int(text)
    else:
        raise UsageError(f"bad range {text!r}; use LO..HI")
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return range(lo, hi + 1)


SWEEP_COLUMNS = ["m", "steps", "final_graph_size", "final_term_size", "normal_union_size",
                 "ell", "bound_G_value"]


def sweep_point(source: str, template: str, m: int, strategy: str, seed: Optional[int],
                step_limit: int, term_cap: int) -> dict:
    """One sweep row; recompiles so it can run in a worker process."""
    cp = compile_source(source)
    normals, safes = parse_args_text(template, cp, m)
    g0 = basic_graph(cp.main, normals, safes)
    red = reduce(g0, cp.provider, strategy, step_limit, seed, keep_snapshots=False)
    n0 = normal_union_size(g0)
    ell = 2 * n0 + cp.d
    head = pint(g0)
    bound = bound_G(head[0].head, head[0].args, ell, normalized_precedence(cp.precedence),
                    cp.d) if len(head) else 0
    size = term_size(red.graph)
    return {"m": m, "steps": red.steps if red.normal else f">={step_limit}",
            "final_graph_size": len(red.graph),
            "final_term_size": size if not term_cap or size <= term_cap else f">={term_cap}",
            "normal_union_size": n0, "ell": ell, "bound_G_value": bound}


def run_sweep(source: str, template: str, ms: Sequence[int], strategy: str = "innermost-leftmost",
              seed: Optional[int] = None, step_limit: int = 100_000, term_cap: int = 10 ** 7,
              jobs: int = 1) -> List[dict]:
    args = [(source, template, m, strategy, seed, step_limit, term_cap) for m in ms]
    if jobs <= 1:
        return [sweep_point(*x) for x in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(sweep_point, *zip(*args)))


def cmd_sweep(a) -> int:
    source = load_source(a.program)
    compile_source(source)  # report compile errors before forking
    rows = run_sweep(source, a.template, _parse_range(a.m), a.strategy, a.seed,
                     a.step_limit, a.term_cap, a.jobs)
    target = a.out
    if target is None and out_dir():
        target = str(out_dir() / "sweep.csv")
    fh = open(target, "w", newline="") if target else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    finally:
        if target:
            fh.close()
    return 0 if all(isinstance(r["steps"], int) for r in rows) else 1


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="srgraph", description="Safe recursion on term graphs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, args=True):
        sp.add_argument("program", help="program file, or 'example'")
        if args:
            sp.add_argument("--args", default=None,
                            help="arguments 'n1, n2; s1' (powers like s^3(0) allowed)")
        sp.add_argument("--strategy", choices=STRATEGIES, default="innermost-leftmost")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--step-limit", type=int, default=100_000)

    sp = sub.add_parser("compile", help="print the compiled rewrite system")
    sp.add_argument("program")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("eval", help="evaluate the main function")
    common(sp)
    sp.add_argument("--oracle", action="store_true", help="compare with the interpreter")
    sp.set_defaults(func=cmd_eval, needs_args=True)

    sp = sub.add_parser("trace", help="write the reduction trace as CSV")
    common(sp)
    sp.add_argument("--csv")
    sp.add_argument("--dot-dir")
    sp.set_defaults(func=cmd_trace, needs_args=True)

    sp = sub.add_parser("check", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", choices=["grs", "ptas", "trace", "all"], default="all")
    sp.add_argument("--prec", help="precedence file (default: the compiler's)")
    sp.add_argument("--max-skeleton", type=int, default=6)
    sp.add_argument("--ell-override", type=int, default=None)
    sp.add_argument("--naive-pint", action="store_true")
    sp.add_argument("--clause1-reading", choices=["l", "k"], default="l")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("sweep", help="measure normal forms over a range of inputs")
    common(sp, args=False)
    sp.add_argument("--template", required=True, help="arguments with {m}, e.g. 's^{m}(0), c(eps,eps);'")
    sp.add_argument("--m", default="1..10", help="range LO..HI")
    sp.add_argument("--term-cap", type=int, default=10 ** 7)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(a, "needs_args", False) and a.args is None:
        parser.error("--args is required")
    try:
        return a.func(a)
    except (DSLError, ParseError, CompileError, PrecedenceError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
