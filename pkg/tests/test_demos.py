import runpy
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parents[1] / "demos"


@pytest.mark.parametrize("name", ["collapse_and_revival.py", "marginals_and_oracle.py"])
def test_demo_runs(name, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runpy.run_path(str(DEMOS / name), run_name="__main__")


def test_all_demos_compile():
    for path in DEMOS.glob("*.py"):
        compile(path.read_text(), str(path), "exec")
