"""Command line entry point: ``stated-skein <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 suite failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .qcoeff import render
from .qtorus import format_element as format_torus, leading_term
from .qtrace import ChekhovFock, is_basis_tangle, k_vector, kappa, trace_leading
from .skein_presented import format_element, format_word, normal_form, parse_word
from .surface import (
    NotNormalError, SurfaceError, Tangle, TensorElement, Triangulation, decompose,
    ideal_triangle, punctured_bigon, punctured_torus,
)

BUILTIN = {
    "triangle": ideal_triangle,
    "punctured-torus": punctured_torus,
    "punctured-bigon": punctured_bigon,
}


class InputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def load_surface(arg: Optional[str]) -> Triangulation:
    if arg is None:
        raise InputError("--surface is required")
    if arg in BUILTIN and not Path(arg).exists():
        return BUILTIN[arg]()
    data = _read_json(arg)
    try:
        t = Triangulation.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed surface file: {exc}") from None
    except SurfaceError as exc:
        raise InputError(str(exc)) from None
    return t


def load_tangle(arg: Optional[str]) -> Tangle:
    if arg is None:
        return Tangle()
    try:
        return Tangle.from_dict(_read_json(arg))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed tangle file: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def format_tensor(x: TensorElement) -> str:
    if not len(x):
        return "0"
    lines = []
    for words, c in sorted(x.terms.items(), key=lambda kv: tuple(map(len, kv[0])) + kv[0], reverse=True):
        cs = render(c, "q")
        body = " ⊗ ".join(format_word(w) for w in words)
        if cs == "1":
            lines.append(body)
        elif len(c.terms) == 1:
            lines.append(f"{cs} * {body}")
        else:
            lines.append(f"({cs}) * {body}")
    return "\n".join(lines)


# ------------------------------------------------------------ subcommands

def cmd_validate(args) -> int:
    t = load_surface(args.surface)
    try:
        rep = t.validate()
    except SurfaceError as exc:
        raise InputError(str(exc)) from None
    print(_dump(rep.as_dict()) if args.format == "json" else rep.text())
    return 0


def cmd_normalize(args) -> int:
    if args.word is None:
        raise InputError("normalize needs a word, e.g. 'b(+,+) a(+,+)'")
    try:
        w = parse_word(args.word)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    x = normal_form(w)
    if args.format == "json":
        print(_dump([
            {"word": format_word(k), "coeff": render(c, "q")}
            for k, c in sorted(x.terms.items())
        ]))
    else:
        print(format_element(x))
    return 0


def _surface_and_tangle(args):
    t = load_surface(args.surface)
    d = load_tangle(args.tangle)
    return t, d


def _not_normal(exc: NotNormalError) -> InputError:
    return InputError(
        f"{exc}\nhint: the tangle is not in normal position; slide returning "
        "chords back across interior edges (surface.straighten) and retry"
    )


def cmd_decompose(args) -> int:
    t, d = _surface_and_tangle(args)
    try:
        x = decompose(t, d)
    except NotNormalError as exc:
        raise _not_normal(exc) from None
    except SurfaceError as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        print(_dump([
            {"words": [format_word(w) for w in k], "coeff": render(c, "q")}
            for k, c in sorted(x.terms.items())
        ]))
    else:
        print(format_tensor(x))
    return 0


def cmd_trace(args) -> int:
    t, d = _surface_and_tangle(args)
    try:
        x = kappa(t, d)
    except NotNormalError as exc:
        raise _not_normal(exc) from None
    except SurfaceError as exc:
        raise InputError(str(exc)) from None
    cf = ChekhovFock(t)
    member = cf.contains(x)
    lead = None if x.is_zero() else leading_term(x)
    if args.format == "json":
        print(_dump({
            "trace": x.serialize(),
            "weyl": format_torus(x, "q", weyl=True),
            "leading": None if lead is None else {"exponents": list(lead[0]), "coeff": str(lead[1])},
            "chekhov_fock": member,
        }))
        return 0
    print(format_torus(x, "q"))
    print(f"weyl: {format_torus(x, 'q', weyl=True)}")
    if lead is not None:
        print(f"leading: exponents {list(lead[0])}, coefficient {render(lead[1], 'q')}")
    print(f"in Chekhov-Fock: {'true' if member else 'false'}")
    return 0


def cmd_leading(args) -> int:
    t, d = _surface_and_tangle(args)
    try:
        if not is_basis_tangle(t, d):
            raise InputError("leading needs a simple, all-plus, positively ordered tangle")
        k, c = trace_leading(t, d)
    except NotNormalError as exc:
        raise _not_normal(exc) from None
    except SurfaceError as exc:
        raise InputError(str(exc)) from None
    kd = k_vector(t, d)
    match = ChekhovFock(t).embed(kd) == tuple(k)
    if args.format == "json":
        print(_dump({"exponents": list(k), "coeff": str(c), "k": list(kd), "matches_k": match}))
    else:
        print(f"leading exponents {list(k)}, coefficient {render(c, 'q')}")
        print(f"k_D {list(kd)} over edges {list(t.edges)}: {'match' if match else 'MISMATCH'}")
    return 0


def cmd_check(args) -> int:
    from .checks import SUITES

    names = list(SUITES) if not args.suite else [s.strip() for s in args.suite.split(",") if s.strip()]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InputError(f"unknown suite(s) {', '.join(unknown)}; known: {', '.join(SUITES)}")
    results = []
    for n in names:
        ok, msg = SUITES[n](args.seed)
        results.append({"suite": n, "ok": ok, "message": msg})
    if args.format == "json":
        print(_dump({"seed": args.seed, "results": results}))
    else:
        for r in results:
            print(f"{'PASS' if r['ok'] else 'FAIL'} {r['suite']}: {r['message']}")
    return 0 if all(r["ok"] for r in results) else 2


COMMANDS = {
    "validate": cmd_validate,
    "normalize": cmd_normalize,
    "decompose": cmd_decompose,
    "trace": cmd_trace,
    "check": cmd_check,
    "leading": cmd_leading,
}


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1); 2 is reserved for failing suites
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stated-skein", description="Stated skein algebras and the quantum trace.")
    p.add_argument("subcommand", choices=list(COMMANDS))
    p.add_argument("word", nargs="?", help="word for normalize, e.g. 'b(+,+) a(+,+)'")
    p.add_argument("--surface", help=f"triangulation JSON file or one of {', '.join(BUILTIN)}")
    p.add_argument("--tangle", help="tangle JSON file (default: empty tangle)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--suite", help="comma separated suite names (default: all)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.subcommand](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
