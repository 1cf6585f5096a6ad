#!/usr/bin/env python3
"""Write DOT renderings: a level-diagram forest and a shuffle gallery.

Usage:
    python3 scripts/render_examples.py --out-dir renders/
    dot -Tsvg renders/level_forest.dot -o level_forest.svg
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dendrotensor import FinSimplex, omega_obj, parse_tree, shuffles
from dendrotensor.render import gallery_dot, to_dot

CHAIN = {
    "levels": [[1, 2, 3, 4], [1, 2, 3], [1]],
    "maps": [{"1": 1, "2": 1, "3": 3, "4": 3}, {"1": 1, "2": 1, "3": "*"}],
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="renders")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    forest = omega_obj(FinSimplex.from_json(CHAIN))
    (out / "level_forest.dot").write_text(to_dot(forest, "level_forest"), encoding="utf-8")

    factors = [parse_tree("p[x,y[]]"), parse_tree("q[u]")]
    sh = shuffles(factors)
    (out / "shuffle_gallery.dot").write_text(
        gallery_dot(sh, "shuffles"), encoding="utf-8"
    )
    print(f"wrote {out / 'level_forest.dot'} and {out / 'shuffle_gallery.dot'} "
          f"({len(sh)} shuffles)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
