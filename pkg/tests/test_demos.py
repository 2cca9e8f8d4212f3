import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = sorted((Path(__file__).parent.parent / "demos").glob("*.py"))


@pytest.mark.parametrize("script", DEMOS, ids=[p.name for p in DEMOS])
def test_demo_runs(script):
    proc = subprocess.run([sys.executable, str(script)], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr


@pytest.mark.parametrize("name,code", [("green", 0), ("splice-z0", 0), ("rieffel-grow", 0), ("kronecker", 2)])
def test_demo_configs_analyze(tmp_path, name, code):
    cfg = Path(__file__).parent.parent / "demos" / "configs" / f"{name}.cfg"
    proc = subprocess.run([sys.executable, "-m", "orbitstrength", "analyze", str(cfg), "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == code, proc.stdout + proc.stderr
