import sys
from pathlib import Path


def tests_on_path():
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
