import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.mark.parametrize("argv", [
    ["run_grid.py", "--g", "1", "--d", "1", "2", "--rings", "gauss"],
    ["isotropy_exponent.py", "2", "1,3"],
    ["oracle_sweep.py", "--count", "3", "--max-g", "2"],
])
def test_script_runs(argv):
    proc = subprocess.run([sys.executable, str(SCRIPTS / argv[0]), *argv[1:]], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    if argv[0] == "isotropy_exponent.py":
        assert "'s = -1 mod e' mispredicts 0 cases" in proc.stdout
