"""Plot log10|error| against k from a ``seqsum`` CSV table.

Not part of the package; needs matplotlib::

    seqsum preset fig1 --out fig1.csv
    python docs/plot_sweep.py fig1.csv -o fig1.png
"""

import argparse
import csv
import math
from collections import defaultdict

import matplotlib.pyplot as plt


def load(path):
    series = defaultdict(lambda: ([], [], []))
    with open(path, newline="") as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        for row in rows:
            if not row["err_abs"] or float(row["err_abs"]) == 0:
                continue
            key = (row["method"], row["z_re"], row["z_im"])
            ks, obs, asym = series[key]
            ks.append(int(row["k"]))
            obs.append(math.log10(float(row["err_abs"])))
            if row["asym_re"]:
                a = complex(float(row["asym_re"]), float(row["asym_im"] or 0))
                asym.append(math.log10(abs(a)) if a else math.nan)
            else:
                asym.append(math.nan)
    return series


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("table")
    ap.add_argument("-o", "--output", help="image file; shows a window if omitted")
    a = ap.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (method, zr, zi), (ks, obs, asym) in sorted(load(a.table).items()):
        label = f"{method}, z=({float(zr):.4g}, {float(zi):.4g})"
        (line,) = ax.plot(ks, obs, ".", label=label)
        if any(not math.isnan(v) for v in asym):
            ax.plot(ks, asym, "-", color=line.get_color(), lw=0.8, alpha=0.7)
    ax.set_xlabel("k")
    ax.set_ylabel("log10 |error|")
    ax.legend(fontsize="small")
    fig.tight_layout()
    if a.output:
        fig.savefig(a.output, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
