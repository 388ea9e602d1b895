"""Command-line front end.  Every command prints one JSON document.

Exit status: 0 on success, 1 when a check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from .diagram_core import (
    DiagramError,
    KSuperDiagram,
    WalledDiagram,
    enumerate_k,
    enumerate_walled,
    parse,
    to_json_obj,
)
from .duality_lab import (
    DEFAULT_SEED,
    GuardError,
    verify_centralizer_relations,
    verify_flip_square,
    verify_mixed_duality,
    verify_sergeev_duality,
)
from .presentation import (
    check_presentation_relations,
    check_sergeev_relations,
    decompose_to_basis_form,
    dim_formulas,
)
from .superalgebra import AlgebraElement, elem_mul, mul, signed_flip
from .tensor_rep import psi_matrix, sergeev_matrix


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n")


def _need(args, *names):
    missing = [f"--{x}" for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except DiagramError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_mul(args) -> int:
    _need(args, "left", "right")
    a, b = _load(args.left), _load(args.right)
    try:
        prod, report = mul(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit({"product": prod.to_json(), "sign_report": report.to_json()})
    return 0


def cmd_enum(args) -> int:
    if args.k is not None:
        ds = enumerate_k(args.k, force=args.force)
    else:
        _need(args, "r", "s")
        ds = enumerate_walled(args.r, args.s, force=args.force)
    _emit({"count": len(ds), "diagrams": [to_json_obj(d) for d in ds]})
    return 0


def cmd_matrix(args) -> int:
    _need(args, "left", "n")
    d = _load(args.left)
    m = sergeev_matrix(d, args.n) if isinstance(d, KSuperDiagram) else psi_matrix(d, args.n)
    _emit(m.to_json())
    return 0


def _report_exit(rep) -> int:
    _emit(rep.to_json())
    return 0 if rep.passed else 1


def cmd_duality(args) -> int:
    _need(args, "n", "r", "s")
    return _report_exit(verify_mixed_duality(args.n, args.r, args.s, args.seed, args.trials, args.mode, args.force))


def cmd_sergeev_duality(args) -> int:
    _need(args, "n", "k")
    return _report_exit(verify_sergeev_duality(args.n, args.k, args.seed, args.trials, args.mode, args.force))


def cmd_relations(args) -> int:
    if args.k is not None:
        rep = check_sergeev_relations(args.k)
        out = {"k": args.k, "passed": rep.passed, "relations": rep.summary(),
               "failures": [x.to_json() for x in rep.failures()]}
        _emit(out)
        return 0 if rep.passed else 1
    _need(args, "r", "s")
    rep = check_presentation_relations(args.r, args.s)
    out = rep.to_json()
    ok = rep.passed
    if args.n is not None:
        checks = verify_centralizer_relations(args.n, args.r, args.s, args.force)
        out["matrix_relations"] = [c.to_json() for c in checks]
        ok = ok and all(c.passed for c in checks)
        out["passed"] = ok
    _emit(out)
    return 0 if ok else 1


def cmd_flip_square(args) -> int:
    _need(args, "n", "r", "s")
    check = verify_flip_square(args.n, args.r, args.s, force=args.force)
    _emit(check.to_json())
    return 0 if check.passed else 1


def cmd_assoc(args) -> int:
    _need(args, "r", "s")
    basis = enumerate_walled(args.r, args.s, force=args.force)
    rng = random.Random(args.seed)
    trials = args.trials if args.trials is not None else 1000
    for _ in range(trials):
        triple = [rng.choice(basis) for _ in range(3)]
        a, b, c = (AlgebraElement.of(d) for d in triple)
        if elem_mul(elem_mul(a, b), c) != elem_mul(a, elem_mul(b, c)):
            _emit({"passed": False, "counterexample": {"diagrams": [to_json_obj(d) for d in triple]}})
            return 1
    _emit({"passed": True, "r": args.r, "s": args.s, "seed": args.seed, "trials": trials})
    return 0


def cmd_dims(args) -> int:
    _need(args, "r", "s")
    fac, tot = dim_formulas(args.r, args.s)
    out = {"factorial": fac, "sum": tot}
    try:
        out["enumerated"] = len(enumerate_walled(args.r, args.s, force=args.force))
    except DiagramError:
        pass
    _emit(out)
    return 0 if fac == tot == out.get("enumerated", fac) else 1


def cmd_decompose(args) -> int:
    _need(args, "left")
    d = _load(args.left)
    if not isinstance(d, WalledDiagram):
        raise UsageError("decompose expects an (r,s)-diagram")
    _emit(decompose_to_basis_form(d).to_json())
    return 0


def cmd_flip(args) -> int:
    _need(args, "left", "r", "s")
    d = _load(args.left)
    if not isinstance(d, KSuperDiagram) or d.k != args.r + args.s:
        raise UsageError("flip expects a k-diagram with k = r + s")
    fd, sign = signed_flip(d, args.r, args.s)
    _emit({"diagram": to_json_obj(fd), "sign": sign})
    return 0


COMMANDS = {
    "mul": (cmd_mul, "multiply two diagrams"),
    "enum": (cmd_enum, "list the diagram basis"),
    "matrix": (cmd_matrix, "matrix of a diagram on the tensor space"),
    "duality": (cmd_duality, "certify the mixed duality"),
    "sergeev-duality": (cmd_sergeev_duality, "certify the Sergeev duality"),
    "relations": (cmd_relations, "check the defining relations"),
    "flip-square": (cmd_flip_square, "check the flip commuting square"),
    "assoc": (cmd_assoc, "random associativity check"),
    "dims": (cmd_dims, "dimension formulas and enumeration count"),
    "decompose": (cmd_decompose, "basis-form decomposition of a diagram"),
    "flip": (cmd_flip, "signed flip of a k-diagram"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superbrauer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        for flag in ("n", "r", "s", "k", "trials"):
            p.add_argument(f"--{flag}", type=int)
        p.add_argument("--left")
        p.add_argument("--right")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--mode", choices=("exact", "modular"))
        p.add_argument("--force", action="store_true", help="raise size guards")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for flag in ("n", "r", "s", "k", "trials"):
        v = getattr(args, flag)
        if v is not None and v < 0:
            print(f"superbrauer: --{flag} must be non-negative", file=sys.stderr)
            return 2
    if args.force:
        print("superbrauer: warning: size guards raised", file=sys.stderr)
    try:
        return COMMANDS[args.command][0](args)
    except (UsageError, GuardError, DiagramError) as exc:
        print(f"superbrauer: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
