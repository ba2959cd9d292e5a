#!/usr/bin/env python3
"""Energy-density snapshots rendered radially over a unit cylinder, one
image per frame of a manifest written by `lumpcyl field`.

The surface radius is 1 + s * E(x, y) with a single scale s per family,
so peak heights are comparable across the frames of a scattering
sequence.

Usage: plot_energy_frames.py --in DIR --out DIR [--format png|pdf]
"""

import argparse
import os
import sys

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from figlib import FigureInputError, FrameManifest, load_frame_grid  # noqa: E402


def render(in_dir: str, out_dir: str, fmt: str = "png",
           bulge: float = 1.2) -> list[str]:
    manifest = FrameManifest.load(os.path.join(in_dir, "manifest.csv"))
    grids = [load_frame_grid(f.path) for f in manifest.frames]
    shape0 = grids[0][2].shape
    for (x, y, E), frame in zip(grids, manifest.frames):
        if E.shape != shape0:
            raise FigureInputError(f"{frame.path}: grid {E.shape} differs "
                                   f"from {shape0}")
    scale = bulge / max(E.max() for _, _, E in grids)

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for idx, ((x, y, E), frame) in enumerate(zip(grids, manifest.frames)):
        yy = np.concatenate([y, [y[0] + 2 * np.pi]])     # close the seam
        EE = np.concatenate([E, E[:, :1]], axis=1)
        r = 1.0 + scale * EE
        X = np.broadcast_to(x[:, None], EE.shape)
        Y = r * np.cos(yy)[None, :]
        Z = r * np.sin(yy)[None, :]
        fig = plt.figure(figsize=(5.0, 4.2))
        ax = fig.add_subplot(projection="3d")
        ax.plot_surface(X, Y, Z, rcount=80, ccount=80,
                        facecolors=plt.cm.inferno(EE / EE.max()
                                                  if EE.max() > 0 else EE),
                        linewidth=0, shade=False)
        ax.set_box_aspect((np.ptp(X), np.ptp(Y), np.ptp(Z)))
        ax.set_axis_off()
        p = frame.parameter
        label = f"{p.real:g}" if p.imag == 0 else f"{p.real:g}+{p.imag:g}i"
        ax.set_title(f"{frame.family}: parameter {label}", fontsize=9)
        path = os.path.join(out_dir, f"frame_{idx:03d}.{fmt}")
        fig.savefig(path, dpi=140)
        plt.close(fig)
        written.append(path)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="in_dir", required=True)
    parser.add_argument("--out", dest="out_dir", required=True)
    parser.add_argument("--format", choices=["png", "pdf"], default="png")
    args = parser.parse_args(argv)
    for path in render(args.in_dir, args.out_dir, args.format):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
