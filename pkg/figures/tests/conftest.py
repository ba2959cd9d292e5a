import os
import subprocess
import sys

import pytest

FIG_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, FIG_DIR)


def run_cli(args, cwd):
    """Drive the primary package through its command-line interface only."""
    proc = subprocess.run([sys.executable, "-m", "lumpcyl.cli"] + args,
                          cwd=cwd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    """CSV inputs produced once per session by the primary CLI."""
    d = tmp_path_factory.mktemp("csv")
    run_cli(["xi0", "--a-min", "0.02", "--a-max", "50", "--per-decade", "12",
             "--out", str(d)], cwd=str(d))
    run_cli(["field", "--family", "gamma2",
             "--alphas=-0.95,-0.333,0,0.333,0.95",
             "--nx", "41", "--ny", "40", "--out", str(d / "tunnel")],
            cwd=str(d))
    run_cli(["field", "--family", "xi0", "--alphas", "5,2,1,0.05",
             "--nx", "41", "--ny", "40", "--out", str(d / "collide")],
            cwd=str(d))
    return d
