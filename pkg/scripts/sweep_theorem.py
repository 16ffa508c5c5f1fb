"""Sweep the order-statistics comparison over enumerated braces.

For each shape every brace is checked over its coefficient ring; rows give
how many braces satisfy the rank hypothesis, how many have equal order
statistics, and how many are defects (hypothesis true, statistics differ).
"""

import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass, field

from modbrace.analysis import DEFECT, corpus_theorem_summary, theorem_check
from modbrace.enumeration import EnumerationTask, enumerate_braces_backtracking

from dual_oracle import parse_shape


@dataclass
class SweepConfig:
    shapes: list[str] = field(default_factory=lambda: [
        "3:1:2", "3:1:3", "3:1:4", "3:1:1,1", "3:1:2,1", "5:1:2", "2:1:2", "2:1:3", "2:1:2,1"])
    d_shapes: list[str] = field(default_factory=lambda: ["3:2:2", "3:1:1,1", "2:2:1,1"])


def sweep(text: str, mode: str) -> dict:
    shape = parse_shape(text)
    res = enumerate_braces_backtracking(EnumerationTask(shape, mode))
    reports = [theorem_check(b) for b in res.braces]
    hyp = [r for r in reports if r.hypothesis_holds]
    return {
        "shape": str(shape), "mode": mode, "braces": res.count,
        "hypothesis": len(hyp),
        "equal_stats": sum(r.stats_equal for r in reports),
        "equal_stats_outside_hypothesis": sum(r.stats_equal for r in reports if not r.hypothesis_holds),
        "circle_abelian": sum(r.circle_abelian for r in reports),
        "circle_profiles": len(Counter(tuple(sorted(r.circle_stats.items())) for r in reports)),
        "verdicts": corpus_theorem_summary(reports),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description="order-statistics sweep")
    ap.add_argument("--shapes", default=None, help="space separated p:lambda:exponents (Z-mode)")
    ap.add_argument("--d-shapes", default=None, help="shapes swept in D-mode")
    args = ap.parse_args()
    cfg = SweepConfig()
    if args.shapes is not None:
        cfg.shapes = args.shapes.split()
    if args.d_shapes is not None:
        cfg.d_shapes = args.d_shapes.split()
    defects = 0
    for mode, shapes in (("Z", cfg.shapes), ("D", cfg.d_shapes)):
        for text in shapes:
            row = sweep(text, mode)
            defects += row["verdicts"][DEFECT]
            print(json.dumps(row), flush=True)
    print(json.dumps({"config": asdict(cfg), "defects": defects}))
    raise SystemExit(1 if defects else 0)


if __name__ == "__main__":
    main()
