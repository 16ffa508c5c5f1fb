"""Run both enumerators on a list of shapes and report counts, agreement and timing.

    python3 scripts/dual_oracle.py --shapes "2:1:2 2:1:1,1 3:1:2" --classes
"""

import argparse
import json
from dataclasses import asdict, dataclass, field

from modbrace.enumeration import EnumerationTask, classify_up_to_isomorphism, enumerate_both
from modbrace.module_core import ModuleShape

DEFAULT_SHAPES = ["2:1:2", "2:1:1,1", "2:1:3", "2:1:2,1", "2:1:1,1,1", "3:1:2", "3:1:1,1",
                  "2:1:4", "2:1:5", "2:1:3,1", "2:1:4,1", "3:1:3", "3:1:2,1", "5:1:2"]


@dataclass
class OracleConfig:
    shapes: list[str] = field(default_factory=lambda: list(DEFAULT_SHAPES))
    mode: str = "Z"
    node_budget: int | None = None
    classes: bool = False


def parse_shape(text: str) -> ModuleShape:
    p, lam, exps = text.split(":")
    return ModuleShape.create(int(p), int(lam), tuple(int(e) for e in exps.split(",")))


def run(cfg: OracleConfig) -> list[dict]:
    rows = []
    for text in cfg.shapes:
        shape = parse_shape(text)
        bt, hol = enumerate_both(EnumerationTask(shape, cfg.mode, node_budget=cfg.node_budget))
        row = {"shape": str(shape), "order": shape.order, "aut": bt.context.k,
               "backtracking": bt.count, "holomorph": hol.count, "agree": bt.keys == hol.keys,
               "complete": bt.complete and hol.complete,
               "seconds": [round(bt.wall_time, 2), round(hol.wall_time, 2)]}
        if cfg.classes:
            row["classes"] = len(classify_up_to_isomorphism(bt.braces, ctx=bt.context))
        rows.append(row)
        print(json.dumps(row), flush=True)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shapes", default=" ".join(DEFAULT_SHAPES),
                    help="space separated p:lambda:exponents")
    ap.add_argument("--mode", default="Z", choices=["Z", "D"])
    ap.add_argument("--budget", type=int, default=None)
    ap.add_argument("--classes", action="store_true")
    args = ap.parse_args()
    cfg = OracleConfig(args.shapes.split(), args.mode, args.budget, args.classes)
    rows = run(cfg)
    bad = [r["shape"] for r in rows if not r["agree"]]
    print(json.dumps({"config": asdict(cfg), "disagreements": bad}))
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
