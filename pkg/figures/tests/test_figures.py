import hashlib
import os
import subprocess
import sys

import numpy as np
import pytest

import figlib
import plot_embedding
import plot_energy_frames
import plot_xi0_scalars


def digest(path):
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


def tree_digests(root):
    out = {}
    for base, _, files in os.walk(root):
        for f in files:
            p = os.path.join(base, f)
            out[os.path.relpath(p, root)] = digest(p)
    return out


def test_xi0_scalars_render(data_dir, tmp_path):
    before = tree_digests(data_dir)
    written = plot_xi0_scalars.render(str(data_dir), str(tmp_path))
    assert [os.path.basename(p) for p in written] == \
        ["xi0_I.png", "xi0_R.png", "xi0_Ueff.png"]
    for p in written:
        assert os.path.getsize(p) > 5000
    # read-only consumers: inputs untouched
    assert tree_digests(data_dir) == before


def test_xi0_scalars_missing_columns(tmp_path):
    bad = tmp_path / "xi0.csv"
    bad.write_text("a,I\n1,2\n")
    with pytest.raises(figlib.FigureInputError):
        plot_xi0_scalars.render(str(tmp_path), str(tmp_path))


def test_embedding_render(data_dir, tmp_path):
    path = plot_embedding.render(str(data_dir), str(tmp_path))
    assert os.path.getsize(path) > 10000
    # the profile columns behave like the paper's surface: tip closing,
    # cylinder-asymptotic mouth
    cols = figlib.load_columns(os.path.join(data_dir, "xi0.csv"),
                               ("radius", "height"))
    assert cols["radius"][0] < 0.5
    assert abs(cols["radius"][-1] - np.sqrt(8 * np.pi)) < 0.05
    assert np.all(np.diff(cols["height"]) > 0)


def test_energy_frames_render_tunneling(data_dir, tmp_path):
    written = plot_energy_frames.render(str(data_dir / "tunnel"),
                                        str(tmp_path))
    assert len(written) == 5
    for p in written:
        assert os.path.getsize(p) > 10000


def test_energy_frames_render_collision(data_dir, tmp_path):
    written = plot_energy_frames.render(str(data_dir / "collide"),
                                        str(tmp_path))
    assert len(written) == 4
    # the collapse end of the sequence concentrates into two sharp peaks:
    # max density grows monotonically along the family 5 -> 0.05
    maxima = [figlib.load_frame_grid(f.path)[2].max()
              for f in figlib.FrameManifest.load(
                  os.path.join(data_dir, "collide", "manifest.csv")).frames]
    assert maxima[0] < maxima[1] < maxima[2] < maxima[3]


def test_energy_frames_reject_mixed_grids(data_dir, tmp_path):
    import csv
    src = data_dir / "tunnel"
    mixed = tmp_path / "mixed"
    mixed.mkdir()
    for name in os.listdir(src):
        (mixed / name).write_bytes((src / name).read_bytes())
    # truncate one frame to a different grid
    with open(mixed / "field_001.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    with open(mixed / "field_001.csv", "w", newline="") as fh:
        csv.writer(fh).writerows(rows[:len(rows) // 2 + 1])
    with pytest.raises(figlib.FigureInputError):
        plot_energy_frames.render(str(mixed), str(tmp_path / "out"))


def test_rerun_is_byte_identical(data_dir, tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    plot_xi0_scalars.render(str(data_dir), str(a))
    plot_xi0_scalars.render(str(data_dir), str(b))
    assert digest(a / "xi0_I.png") == digest(b / "xi0_I.png")


def test_scripts_run_from_command_line(data_dir, tmp_path):
    fig_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    for script in ("plot_xi0_scalars.py", "plot_embedding.py"):
        proc = subprocess.run(
            [sys.executable, os.path.join(fig_dir, script),
             "--in", str(data_dir), "--out", str(tmp_path / "cli"),
             "--format", "pdf"],
            capture_output=True, text=True, cwd=fig_dir)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip()
    assert os.path.getsize(tmp_path / "cli" / "embedding.pdf") > 1000


def test_manifest_monotonicity_guard(tmp_path):
    (tmp_path / "field_000.csv").write_text("x,y,E\n0,0,1\n")
    (tmp_path / "field_001.csv").write_text("x,y,E\n0,0,1\n")
    (tmp_path / "field_002.csv").write_text("x,y,E\n0,0,1\n")
    (tmp_path / "manifest.csv").write_text(
        "file,family,param_re,param_im\n"
        "field_000.csv,gamma2,0,0\n"
        "field_001.csv,gamma2,1,0\n"
        "field_002.csv,gamma2,0.5,0\n")
    with pytest.raises(figlib.FigureInputError):
        figlib.FrameManifest.load(str(tmp_path / "manifest.csv"))
