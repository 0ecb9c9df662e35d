import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["class_sizes.py", "--max-vertices", "4"], " 4      543      185                 0"),
        (["witness_routes.py", "--trials", "60"], "valid"),
        (["regen_golden.py", "--check"], ""),
    ],
)
def test_script_runs(argv, needle):
    proc = subprocess.run([sys.executable, str(SCRIPTS / argv[0]), *argv[1:]], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert needle in proc.stdout
