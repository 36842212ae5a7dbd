"""Render the simulator's sweep CSVs as image files.

Strictly a plotting layer: the scripts read CSV columns by name and never
recompute any physics.  Rendering is a pure function of the CSV bytes, with
fixed canvas size, fonts and dpi, so identical inputs produce identical
image files.

Figure 2: success probability versus the seed ratio, one curve per
iteration count (dotted, dashed, solid for 1, 2, 3).
Figure 3: fidelity to the limit state, same three-curve styling.
Figure 4: entanglement ratio (solid, left axis) and overall success
probability (dashed, log right axis) versus the preparation transmittivity,
with a reference line at ratio 1 (annotation, not data).
"""

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

SCHEMAS = {
    2: ("lambda", ["p1", "p2", "p3"]),
    3: ("lambda", ["F1", "F2", "F3"]),
    4: ("T", ["entanglement_ratio", "overall_probability"]),
}

SERIES_STYLES = [":", "--", "-"]

AXIS_LABELS = {
    2: ("seed ratio", "success probability"),
    3: ("seed ratio", "fidelity to limit state"),
    4: ("transmittivity", "entanglement ratio"),
}


class SchemaError(Exception):
    """CSV is missing a required column."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    figure_id: int
    out_path: str

    def __post_init__(self):
        if self.figure_id not in SCHEMAS:
            raise ValueError("figure id must be 2, 3 or 4")


def read_columns(path, figure_id):
    """Load the required columns, failing loudly on a missing one."""
    x_name, y_names = SCHEMAS[figure_id]
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for name in [x_name, *y_names]:
            if name not in fields:
                raise SchemaError(f"missing column '{name}' in {path}")
        rows = list(reader)
    x = [float(row[x_name]) for row in rows]
    ys = {name: [float(row[name]) for row in rows] for name in y_names}
    return x, ys


def render(spec):
    """Build the figure for ``spec`` and return it (without saving)."""
    x, ys = read_columns(spec.csv_path, spec.figure_id)
    x_label, y_label = AXIS_LABELS[spec.figure_id]

    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=150)
    if spec.figure_id in (2, 3):
        _, y_names = SCHEMAS[spec.figure_id]
        for name, style in zip(y_names, SERIES_STYLES):
            ax.plot(x, ys[name], style, color="black", label=name)
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        ax.set_ylim(0.0, 1.05)
        ax.legend(frameon=False)
    else:
        ax.plot(x, ys["entanglement_ratio"], "-", color="black", label="ratio")
        ax.axhline(1.0, color="0.6", linewidth=0.8, linestyle="-.")
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        ax.set_yscale("log")
        twin = ax.twinx()
        twin.plot(
            x, ys["overall_probability"], "--", color="black", label="probability"
        )
        twin.set_yscale("log")
        twin.set_ylabel("overall success probability")
    fig.tight_layout()
    return fig


def render_to_file(spec):
    fig = render(spec)
    fig.savefig(spec.out_path, format="png", metadata={"Software": None})
    plt.close(fig)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="render_figure")
    parser.add_argument("--figure", type=int, choices=(2, 3, 4), required=True)
    parser.add_argument("--csv", required=True)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        render_to_file(FigureSpec(args.csv, args.figure, args.out))
    except SchemaError as exc:
        print(f"render_figure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"render_figure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
