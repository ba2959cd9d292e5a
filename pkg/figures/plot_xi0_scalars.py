#!/usr/bin/env python3
"""Line plots of the symmetric-surface scalars from xi0.csv:
the conformal factor I(a), the curvature R(a), and the effective
potential U_eff(a), each with its asymptotic guide line.

Usage: plot_xi0_scalars.py --in DIR --out DIR [--format png|pdf] [--linear-x]
"""

import argparse
import math
import os
import sys

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from figlib import load_columns  # noqa: E402


def render(in_dir: str, out_dir: str, fmt: str = "png",
           log_x: bool = True) -> list[str]:
    cols = load_columns(os.path.join(in_dir, "xi0.csv"),
                        ("a", "I", "R", "Ueff"))
    a = cols["a"]
    os.makedirs(out_dir, exist_ok=True)
    written = []

    specs = [
        ("I", cols["I"], "conformal factor I(a)",
         8 * math.pi / a ** 2, r"$8\pi/a^2$"),
        ("R", cols["R"], "curvature R(a)", None, None),
        ("Ueff", cols["Ueff"], r"effective potential $U_{\rm eff}(a)$",
         np.full_like(a, 1 / (16 * math.pi)), r"$1/16\pi$"),
    ]
    for name, vals, title, guide, guide_label in specs:
        fig, ax = plt.subplots(figsize=(5.2, 3.6))
        ax.plot(a, vals, lw=1.6, color="tab:blue")
        if guide is not None:
            ax.plot(a, guide, lw=0.9, ls="--", color="tab:gray",
                    label=guide_label)
            ax.legend(frameon=False)
        if log_x:
            ax.set_xscale("log")
        if name in ("I", "R"):
            ax.set_yscale("log")
        ax.set_xlabel("a")
        ax.set_title(title)
        fig.tight_layout()
        path = os.path.join(out_dir, f"xi0_{name}.{fmt}")
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="in_dir", required=True)
    parser.add_argument("--out", dest="out_dir", required=True)
    parser.add_argument("--format", choices=["png", "pdf"], default="png")
    parser.add_argument("--linear-x", action="store_true")
    args = parser.parse_args(argv)
    for path in render(args.in_dir, args.out_dir, args.format,
                       log_x=not args.linear_x):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
