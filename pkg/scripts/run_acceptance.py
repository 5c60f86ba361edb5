"""Run the ten acceptance criteria outside pytest and print one line per criterion."""

import runpy
import sys
from pathlib import Path

if __name__ == "__main__":
    tests = Path(__file__).resolve().parent.parent / "tests"
    sys.path.insert(0, str(tests))
    sys.argv = [str(tests / "test_acceptance.py")]
    runpy.run_path(str(tests / "test_acceptance.py"), run_name="__main__")
