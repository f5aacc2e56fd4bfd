import io
import shlex
from pathlib import Path

import pytest

from hvn.cli import main

GOLDEN = Path(__file__).parent / "golden"


def _load(path):
    lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
    header = [ln for ln in lines if ln.startswith("# ")]
    assert header[0].startswith("# reproduces: ")
    argv = shlex.split(header[1][len("# command: hvn "):])
    return argv, "".join(lines[len(header):])


@pytest.mark.parametrize("path", sorted(GOLDEN.iterdir()), ids=lambda p: p.name)
def test_golden(path):
    argv, want = _load(path)
    out = io.StringIO()
    assert main(argv, stdout=out) == 0
    assert out.getvalue() == want
