#!/usr/bin/env python3
"""Regenerate the three sweep CSVs and their figures end to end.

Runs the simulator CLI for each sweep, then hands the CSVs to the plotting
package.  Both stages go through their command-line entry points, so this
script exercises exactly the shipped interfaces.

Usage: python scripts/make_figures.py [output_dir]
"""

import pathlib
import subprocess
import sys


def run(cmd):
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)


def main():
    out_dir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "out")
    out_dir.mkdir(parents=True, exist_ok=True)

    sweeps = {
        2: ["gaussify", "sweep", "--figure", "2"],
        3: ["gaussify", "sweep", "--figure", "3"],
        4: ["gaussify", "sweep", "--figure", "4", "--q", "0.01", "--iters", "3",
            "--cutoff", "10"],
    }
    for figure_id, cmd in sweeps.items():
        csv_path = out_dir / f"figure{figure_id}.csv"
        run(cmd + ["--out", str(csv_path)])
        run([
            "render_figure",
            "--figure", str(figure_id),
            "--csv", str(csv_path),
            "--out", str(out_dir / f"figure{figure_id}.png"),
        ])
    print(f"wrote CSVs and images to {out_dir}/")


if __name__ == "__main__":
    main()
