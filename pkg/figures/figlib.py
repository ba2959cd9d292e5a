"""Shared loaders for the figure scripts.

The scripts are read-only consumers of the CSV files written by the
lumpcyl CLI; nothing here imports the library itself.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np


class FigureInputError(ValueError):
    """Input CSV missing, malformed, or inconsistent."""


def load_columns(path: str, required: tuple[str, ...]) -> dict:
    """Load a CSV as float columns, insisting on the required header."""
    if not os.path.exists(path):
        raise FigureInputError(f"missing input {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise FigureInputError(f"{path}: empty file")
        missing = [c for c in required if c not in header]
        if missing:
            raise FigureInputError(f"{path}: missing columns {missing}")
        idx = {c: header.index(c) for c in required}
        cols = {c: [] for c in required}
        for row in reader:
            for c in required:
                cols[c].append(float(row[idx[c]]))
    return {c: np.asarray(v) for c, v in cols.items()}


@dataclass(frozen=True)
class Frame:
    path: str
    family: str
    parameter: complex


@dataclass(frozen=True)
class FrameManifest:
    frames: tuple

    @classmethod
    def load(cls, path: str) -> "FrameManifest":
        if not os.path.exists(path):
            raise FigureInputError(f"missing manifest {path}")
        base = os.path.dirname(os.path.abspath(path))
        frames = []
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["file", "family", "param_re", "param_im"]:
                raise FigureInputError(f"{path}: unexpected manifest header "
                                       f"{header}")
            for row in reader:
                fp = os.path.join(base, row[0])
                if not os.path.exists(fp):
                    raise FigureInputError(f"{path}: listed frame {row[0]} "
                                           "does not exist")
                frames.append(Frame(fp, row[1],
                                    complex(float(row[2]), float(row[3]))))
        if not frames:
            raise FigureInputError(f"{path}: no frames listed")
        params = np.array([f.parameter for f in frames])
        for part in (params.real, params.imag):
            if len(part) > 1 and np.ptp(part) > 0:
                d = np.diff(part)
                if not (np.all(d >= 0) or np.all(d <= 0)):
                    raise FigureInputError("frame parameters are not "
                                           "monotone along the family")
        return cls(tuple(frames))


def load_frame_grid(path: str):
    """Read an x,y,E frame back into (x, y, E[nx, ny])."""
    cols = load_columns(path, ("x", "y", "E"))
    x = np.unique(cols["x"])
    y = np.unique(cols["y"])
    if len(x) * len(y) != len(cols["E"]):
        raise FigureInputError(f"{path}: not a full tensor grid")
    E = cols["E"].reshape(len(x), len(y))
    return x, y, E
