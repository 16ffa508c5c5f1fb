"""Command-line interface.

Exit codes: 0 success (including expected negative results), 1 a
mathematical defect or failed verification, 2 an input error or an
exhausted search budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analysis, brace_core, enumeration, radical_ring, series
from .brace_core import Brace, DocumentError, GammaFunction, brace_from_document, brace_to_document
from .finite_ring import RingAction
from .galois_ring import GaloisRingError, construct_galois_ring
from .module_core import FiniteModule, ModuleError, ModuleShape

EXIT_OK, EXIT_DEFECT, EXIT_INPUT = 0, 1, 2
MAX_ROWS = 32


class InputError(Exception):
    pass


# -- rendering ----------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _rows(items: Sequence) -> list[str]:
    items = list(items)
    out = [str(v) for v in items[:MAX_ROWS]]
    if len(items) > MAX_ROWS:
        out.append(f"... ({len(items) - MAX_ROWS} more rows truncated)")
    return out


def _table(record: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in record.items():
        if isinstance(v, dict) and v and all(isinstance(x, (dict, list)) for x in v.values()):
            lines.append(f"{pad}{k}:")
            lines.append(_table(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for row in _rows(v):
                lines.append(f"{pad}  {row}")
        elif isinstance(v, list) and len(v) > MAX_ROWS:
            lines.append(f"{pad}{k}:")
            for row in _rows(v):
                lines.append(f"{pad}  {row}")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def emit(record: dict, fmt: str) -> None:
    record = _jsonable(record)
    if fmt == "json":
        print(json.dumps(record, indent=2, sort_keys=False))
    else:
        print(_table(record))


# -- parsing helpers ----------------------------------------------------------

def parse_ring(text: str):
    try:
        p, c, lam = (int(v) for v in text.split(","))
        return construct_galois_ring(p, lam, c)
    except (ValueError, GaloisRingError) as exc:
        raise InputError(f"bad --ring '{text}', expected p,c,lambda: {exc}") from exc


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"bad integer list '{text}'") from exc


def load_braces(path: str) -> list[Brace]:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}")
    try:
        text = p.read_text()
        if p.suffix == ".jsonl":
            docs = [json.loads(line) for line in text.splitlines() if line.strip()]
        else:
            docs = [json.loads(text)]
        braces = [brace_from_document(d) for d in docs]
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed brace document: {exc}") from exc
    for i, b in enumerate(braces):
        b.name = b.name or f"{p.name}#{i}"
    return braces


def _stats(d: dict) -> str:
    return "{" + ", ".join(f"{k}:{v}" for k, v in sorted(d.items())) + "}"


# -- subcommands --------------------------------------------------------------

def cmd_verify(args) -> int:
    path = Path(args.path)
    if not path.exists():
        raise InputError(f"no such file: {args.path}")
    try:
        doc = json.loads(path.read_text())
        mod, gamma = brace_core.gamma_from_document(doc)
    except (json.JSONDecodeError, DocumentError, ModuleError) as exc:
        raise InputError(str(exc)) from exc
    rep = brace_core.verify_gamma(mod, gamma)
    ok = rep.kind == brace_core.D_BRACE or (args.mode == "z" and rep.kind == brace_core.Z_BRACE)
    emit({"path": str(path), "order": mod.size, "classification": rep.kind,
          "linear_over": rep.linear_over, "counterexample": rep.counterexample,
          "reason": rep.reason, "accepted": ok}, args.format)
    return EXIT_OK if ok else EXIT_DEFECT


def cmd_enumerate(args) -> int:
    ring = parse_ring(args.ring)
    try:
        shape = ModuleShape(ring.with_precision(max(parse_ints(args.exponents))),
                            tuple(parse_ints(args.exponents)))
    except (ModuleError, ValueError) as exc:
        raise InputError(f"bad shape: {exc}") from exc
    task = enumeration.EnumerationTask(shape, args.mode.upper(), node_budget=args.budget)
    bt, hol = enumeration.enumerate_both(task)
    agree = bt.keys == hol.keys
    record = {"shape": str(shape), "mode": task.mode, "backtracking": bt.summary(),
              "holomorph": hol.summary(), "agree": agree}
    if args.out:
        record["summary_file"] = str(enumeration.write_corpus(args.out, bt))
        record["corpus"] = args.out
    if args.classes:
        record["classes"] = len(enumeration.classify_up_to_isomorphism(bt.braces, ctx=bt.context))
    emit(record, args.format)
    if not (bt.complete and hol.complete):
        return EXIT_INPUT
    return EXIT_OK if agree else EXIT_DEFECT


def cmd_series(args) -> int:
    out = []
    bad = False
    for b in load_braces(args.path):
        reps = series.all_series(b)
        csv = series.csv_minimality_check(b)
        bad |= any(r.violations for r in reps.values()) or not csv.ok
        out.append({"name": b.name, "order": b.size,
                    **{k: {"orders": r.orders, "class": r.cls, "violations": r.violations}
                       for k, r in reps.items()},
                    "n2_trivial_quotient": csv.quotient_trivial, "n2_minimal": csv.minimal})
    emit({"series": out}, args.format)
    return EXIT_DEFECT if bad else EXIT_OK


def cmd_split(args) -> int:
    bad = False
    out = []
    for b in load_braces(args.path):
        n = args.modulus or b.module.exponent
        act = RingAction.integer(b.module, n)
        rep = brace_core.peirce_split_brace(b, act)
        bad |= not rep.conditions_agree or not rep.all_left_ideals
        out.append({"name": b.name, "acting_ring": f"Z/{n}",
                    "summand_orders": [s.order for s in rep.summands],
                    "left_ideals": [c.left_ideal for c in rep.classifications],
                    "ideals": [c.ideal for c in rep.classifications],
                    "conditions": rep.conditions,
                    "product_decomposition": rep.isomorphism is not None})
    emit({"split": out}, args.format)
    return EXIT_DEFECT if bad else EXIT_OK


def cmd_theorem(args) -> int:
    ring = parse_ring(args.ring) if args.ring else None
    reports = []
    for b in load_braces(args.path):
        try:
            reports.append(analysis.theorem_check(b, ring))
        except (analysis.AnalysisError, brace_core.BraceError) as exc:
            raise InputError(str(exc)) from exc
    summary = analysis.corpus_theorem_summary(reports)
    rows = [{"name": r.name, "p": r.p, "lambda": r.lam, "rank_D": r.rank_d, "rank_Z": r.rank_z,
             "hypothesis": r.hypothesis_holds, "additive": _stats(r.additive_stats),
             "circle": _stats(r.circle_stats), "omega_ok": all(r.omega_inclusions),
             "verdict": r.verdict} for r in reports]
    if args.format == "json":
        emit({"summary": summary, "reports": [r.to_json() for r in reports]}, "json")
    else:
        emit({"summary": summary, "reports": rows}, "table")
    return EXIT_DEFECT if summary[analysis.DEFECT] else EXIT_OK


def _nilpotent_from_spec(text: str) -> radical_ring.NilpotentRing:
    kind, _, params = text.partition(":")
    try:
        vals = parse_ints(params)
        if kind == "multiples":
            return radical_ring.NilpotentRing.multiples(*vals)
        if kind == "galois-ideal":
            p, c, lam, k = vals
            return radical_ring.NilpotentRing.from_galois_ideal(construct_galois_ring(p, lam, c), k)
        if kind == "zero":
            return radical_ring.NilpotentRing.zero(vals)
        path = Path(text)
        if path.exists():
            return radical_ring.NilpotentRing.from_json(path.read_text())
    except (TypeError, ValueError, GaloisRingError) as exc:
        raise InputError(f"bad ring description '{text}': {exc}") from exc
    raise InputError(f"unknown ring description '{text}'")


def cmd_radical(args) -> int:
    n = _nilpotent_from_spec(args.ring_spec)
    rep = radical_ring.validate_nilpotent_ring(n)
    record = {"ring": n.name, "order": n.size, "valid": rep.valid, "violations": rep.violations,
              "nilpotency_index": rep.index, "commutative": rep.commutative}
    if not rep.valid:
        emit(record, args.format)
        return EXIT_INPUT
    b = radical_ring.brace_from_radical_ring(n)
    record["brace"] = b.kind
    record["two_sided"] = b.is_two_sided
    if n.commutative:
        record["adjoint_comparison"] = radical_ring.corollary_radring_check(n).to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(brace_to_document(b)) + "\n")
        record["document"] = args.out
    emit(record, args.format)
    return EXIT_OK


# -- demos --------------------------------------------------------------------

def gaussian_module(k: int = 2) -> FiniteModule:
    """(Z[i]/2^k)^2 with coordinates (Re a, Im a, Re b, Im b) and the scalar i."""
    m = 2 ** k
    mod = FiniteModule((m, m, m, m), name=f"(Z[i]/{m})^2")
    c = mod.coords
    rot = np.stack([-c[:, 1], c[:, 0], -c[:, 3], c[:, 2]], axis=1)
    mod.scalars["i"] = mod.index_of(rot)
    return mod


def gaussian_brace(k: int = 2) -> Brace:
    """gamma_(a, b) = (-1)^(Re a) id."""
    mod = gaussian_module(k)
    ident = np.arange(mod.size)
    minus = mod.neg.copy()
    index = (mod.coords[:, 0] % 2).astype(np.int64)
    return Brace(mod, GammaFunction([ident, minus], index), name=mod.name)


def demo_gaussian(out: Path) -> tuple[dict, int]:
    b = gaussian_brace()
    doc_path = out / "gaussian.json"
    doc_path.write_text(json.dumps(brace_to_document(b)) + "\n")
    mod, gamma = brace_core.gamma_from_document(json.loads(doc_path.read_text()))
    rep = brace_core.verify_gamma(mod, gamma)
    g10 = int(b.gamma.index[mod.index([1, 0, 0, 0])])
    record = {
        "demo": "gaussian", "document": str(doc_path), "order": b.size,
        "classification": rep.kind, "S-linear": rep.linear_over.get("i", False),
        "gamma_(1,0)_is_minus_id": bool(np.array_equal(b.gamma.registry[g10], mod.neg)),
        "two_sided": b.is_two_sided,
        "additive": _stats(b.additive_stats), "circle": _stats(b.circle_stats),
        "narrative": "gamma_(a,b) = (-1)^Re(a) id is linear over Z[i]/4, so the brace is an S-brace.",
    }
    return record, EXIT_OK if rep.kind == brace_core.D_BRACE else EXIT_DEFECT


def demo_galois_gain(out: Path) -> tuple[dict, int]:
    spec = construct_galois_ring(3, 2, 3)
    n = radical_ring.NilpotentRing.from_galois_ideal(spec, 1)
    b = radical_ring.brace_from_radical_ring(n)
    doc_path = out / "galois_gain.json"
    doc_path.write_text(json.dumps(brace_to_document(b)) + "\n")
    over_d = analysis.theorem_check(b)
    over_z = analysis.theorem_check(b, construct_galois_ring(3, 1, 2))
    record = {
        "demo": "galois-gain", "document": str(doc_path), "ring": str(b.module.ring),
        "rank_D": over_d.rank_d, "rank_Z": over_d.rank_z,
        "D_hypothesis": over_d.hypothesis_holds, "Z_hypothesis": over_z.hypothesis_holds,
        "additive": _stats(over_d.additive_stats), "circle": _stats(over_d.circle_stats),
        "verdict_over_D": over_d.verdict, "verdict_over_Z": over_z.verdict,
        "narrative": "rank_Z = 2 is not below p - 1 = 2, so the integer criterion is inconclusive; "
                     "rank_D = 1 < 2 over GR(3,2,2) decides it.",
    }
    ok = over_d.verdict == analysis.CONFIRMED and not over_z.hypothesis_holds
    return record, EXIT_OK if ok else EXIT_DEFECT


def demo_sylow_split(out: Path) -> tuple[dict, int]:
    mod = FiniteModule([12], name="Z/12")
    b = Brace.trivial(mod, name="trivial Z/12")
    doc_path = out / "sylow_split.json"
    doc_path.write_text(json.dumps(brace_to_document(b)) + "\n")
    rep = brace_core.peirce_split_brace(b, RingAction.integer(mod, 12))
    record = {
        "demo": "sylow-split", "document": str(doc_path),
        "idempotents": [s.idempotent for s in rep.summands],
        "summand_orders": [s.order for s in rep.summands],
        "ideals": [c.ideal for c in rep.classifications],
        "conditions": rep.conditions,
        "narrative": "The Peirce pieces e N are the Sylow subgroups of orders 4 and 3.",
    }
    ok = rep.all_ideals and all(rep.conditions.values())
    return record, EXIT_OK if ok else EXIT_DEFECT


DEMOS = {"gaussian": demo_gaussian, "galois-gain": demo_galois_gain, "sylow-split": demo_sylow_split}


def cmd_demo(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    record, code = DEMOS[args.name](out)
    emit(record, args.format)
    return code


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modbrace", description="Finite braces and module braces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["table", "json"], default="table")
        return p

    p = common(sub.add_parser("verify", help="classify a brace document"))
    p.add_argument("path")
    p.add_argument("--mode", choices=["d", "z"], default="d",
                   help="accept Z-braces too with --mode z")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("enumerate", help="enumerate braces on a module, both methods"))
    p.add_argument("--ring", required=True, help="p,c,lambda")
    p.add_argument("--exponents", required=True, help="comma separated, e.g. 2,1")
    p.add_argument("--mode", choices=["Z", "D", "z", "d"], default="Z")
    p.add_argument("--budget", type=int, default=None, help="node budget per method")
    p.add_argument("--out", default=None, help="corpus file (JSON lines)")
    p.add_argument("--classes", action="store_true", help="also count isomorphism classes")
    p.set_defaults(func=cmd_enumerate)

    p = common(sub.add_parser("series", help="left, right and derived series"))
    p.add_argument("path")
    p.set_defaults(func=cmd_series)

    p = common(sub.add_parser("split", help="Peirce split under an integer action"))
    p.add_argument("path")
    p.add_argument("--modulus", type=int, default=None, help="acting ring Z/n (default: exponent)")
    p.set_defaults(func=cmd_split)

    p = common(sub.add_parser("theorem", help="compare order statistics of + and o"))
    p.add_argument("path", help="brace document (.json) or corpus (.jsonl)")
    p.add_argument("--ring", default=None, help="p,c,lambda of the coefficient ring")
    p.set_defaults(func=cmd_theorem)

    p = common(sub.add_parser("radical", help="nilpotent ring and its adjoint brace"))
    p.add_argument("ring_spec", help="multiples:n,d | galois-ideal:p,c,lambda,k | zero:orders | file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_radical)

    p = common(sub.add_parser("demo", help="generated worked examples"))
    p.add_argument("name", choices=sorted(DEMOS))
    p.add_argument("--out", default="demo_out")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ModuleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
