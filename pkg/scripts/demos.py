"""Regenerate the three worked examples into one directory and print their reports."""

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from modbrace.cli import DEMOS, _jsonable


@dataclass
class DemoConfig:
    out: Path = Path("demo_out")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DemoConfig.out)
    cfg = DemoConfig(ap.parse_args().out)
    cfg.out.mkdir(parents=True, exist_ok=True)
    failed = []
    for name, fn in DEMOS.items():
        record, code = fn(cfg.out)
        print(json.dumps(_jsonable(record), indent=2))
        if code:
            failed.append(name)
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
