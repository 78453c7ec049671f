"""Run every figure recipe in scripts/recipes and write CSV tables under results/.

    python3 scripts/reproduce_figures.py              # all recipes
    python3 scripts/reproduce_figures.py loss_curves fock_family

Set WIGNERLOSS_WORKERS to spread the curves of a recipe over processes.
The numeric-policy recipes (loss_curves, cat_family) take tens of minutes on
one core with the budgets stored in the recipe files.
"""

import argparse
import sys
import time
from pathlib import Path

from wignerloss.cli import main

RECIPES = Path(__file__).resolve().parent / "recipes"


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("names", nargs="*", help="recipe names (default: all)")
    parser.add_argument("--results", default="results", help="output root")
    parser.add_argument("--grid-n", type=int, default=None, help="override every recipe's grid_n")
    args = parser.parse_args(argv)

    names = args.names or sorted(p.stem for p in RECIPES.glob("*.ini"))
    for name in names:
        recipe = RECIPES / f"{name}.ini"
        if not recipe.is_file():
            print(f"unknown recipe {name!r}", file=sys.stderr)
            return 2
        cmd = ["sweep", "--config", str(recipe), "--out", str(Path(args.results) / name)]
        if args.grid_n:
            cmd += ["--grid-n", str(args.grid_n)]
        start = time.perf_counter()
        code = main(cmd)
        print(f"# {name}: exit {code} in {time.perf_counter() - start:.1f}s", file=sys.stderr)
        if code:
            return code
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
