"""
Generated plot scripts.

The library never imports a plotting package; each run writes a small
standalone script that reads its own tables and draws them with matplotlib.
"""
from typing import Dict, NamedTuple, Optional, Tuple


class PlotSpec(NamedTuple):
    table: str
    x: str
    y: str
    group: Tuple[str, ...]
    logx: bool
    logy: bool
    title: str


PLOT_SPECS: Dict[str, PlotSpec] = {
    "twisted-sweep": PlotSpec("curves", "T", "abs", ("surface", "lambda"), True, True,
                              "Twisted integrals |I(T)|"),
    "product-flow": PlotSpec("curves", "T", "abs", ("surface", "lambda"), True, True,
                             "Product-flow deviations"),
    "kz-exponents": PlotSpec("paths", "index", "exponent", ("path",), False, False,
                             "Lyapunov exponents per path"),
    "gap-sweep": PlotSpec("checkpoints", "step", "alpha_hat", ("surface", "lambda"), True, False,
                          "Growth-rate proxy convergence"),
    "spectral": PlotSpec("mass", "r", "mass_upper", ("surface", "lambda"), True, True,
                         "Spectral mass upper bounds"),
    "weakmix": PlotSpec("decay", "T", "decay_value", ("surface",), True, True,
                        "Cesaro-averaged squared correlations"),
}

_TEMPLATE = '''#!/usr/bin/env python3
"""Plot {title} from {filename}. Requires matplotlib."""
import csv
import json
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
SOURCE = HERE / "{filename}"
X, Y = "{x}", "{y}"
GROUP = {group!r}


def load_rows():
    if SOURCE.suffix == ".json":
        return json.loads(SOURCE.read_text())
    with open(SOURCE, newline="") as f:
        return list(csv.DictReader(f))


def main():
    series = defaultdict(list)
    for row in load_rows():
        key = tuple(row[g] for g in GROUP)
        series[key].append((float(row[X]), float(row[Y])))
    fig, ax = plt.subplots()
    for key, points in sorted(series.items()):
        points.sort()
        label = ", ".join(f"{{g}}={{v}}" for g, v in zip(GROUP, key))
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=label)
    ax.set_xscale("{xscale}")
    ax.set_yscale("{yscale}")
    ax.set_xlabel(X)
    ax.set_ylabel(Y)
    ax.set_title("{title}")
    ax.legend(fontsize="small")
    fig.savefig(HERE / "{stem}.png", dpi=150)


if __name__ == "__main__":
    main()
'''


def plot_script(kind: str, fmt: str) -> Optional[str]:
    """Source of the plot script for ``kind``, or None when there is nothing to plot."""
    spec = PLOT_SPECS.get(kind)
    if spec is None:
        return None
    return _TEMPLATE.format(
        title=spec.title,
        filename=f"{spec.table}.{fmt}",
        x=spec.x,
        y=spec.y,
        group=spec.group,
        xscale="log" if spec.logx else "linear",
        yscale="log" if spec.logy else "linear",
        stem=spec.table,
    )
