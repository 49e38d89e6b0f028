import json

import pytest

import cli
from vsb.diagram import MorseDiagram, diagram_to_json


@pytest.fixture
def run_cli():
    """Run the command line in-process; returns (exit code, stdout text, stderr text)."""

    def _run(*argv, stdin=b""):
        code, out, err = cli.run(list(argv), stdin)
        return code, out.decode("utf-8"), err.decode("utf-8")

    return _run


@pytest.fixture
def write_json(tmp_path):
    def _write(name, payload):
        if isinstance(payload, MorseDiagram):
            payload = diagram_to_json(payload)
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return _write
