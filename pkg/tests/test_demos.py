import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = sorted((Path(__file__).parent.parent / "demos").glob("*.py"))


@pytest.mark.parametrize("path", DEMOS, ids=lambda p: p.stem)
def test_demo_runs(path, tmp_path):
    res = subprocess.run([sys.executable, str(path), str(tmp_path / "out.svg")],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0, res.stderr
