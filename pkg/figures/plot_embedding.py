#!/usr/bin/env python3
"""3D render of the symmetric two-lump surface embedded in R^3 as a
surface of revolution, from the radius/height columns of xi0.csv.
The surface closes toward radius 0 at the tip and is asymptotic to a
cylinder of radius sqrt(8 pi); both axes share one scale.

Usage: plot_embedding.py --in DIR --out DIR [--format png|pdf]
"""

import argparse
import os
import sys

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from figlib import load_columns  # noqa: E402


def render(in_dir: str, out_dir: str, fmt: str = "png") -> str:
    cols = load_columns(os.path.join(in_dir, "xi0.csv"), ("radius", "height"))
    radius, height = cols["radius"], cols["height"]
    theta = np.linspace(0.0, 2 * np.pi, 120)
    X = radius[:, None] * np.cos(theta)[None, :]
    Y = radius[:, None] * np.sin(theta)[None, :]
    Z = np.broadcast_to(height[:, None], X.shape)

    fig = plt.figure(figsize=(5.6, 5.0))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(X, Y, Z, rcount=60, ccount=60, cmap="viridis",
                    linewidth=0, antialiased=True)
    ax.set_box_aspect((np.ptp(X), np.ptp(Y), max(np.ptp(Z), 1e-9)))
    ax.set_axis_off()
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"embedding.{fmt}")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="in_dir", required=True)
    parser.add_argument("--out", dest="out_dir", required=True)
    parser.add_argument("--format", choices=["png", "pdf"], default="png")
    args = parser.parse_args(argv)
    print(render(args.in_dir, args.out_dir, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
