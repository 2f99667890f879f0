"""Drive this backend from the frontend CLI, end to end over the protocol."""
import importlib.util
import json
import shlex
import subprocess
import sys

import pytest

pytestmark = pytest.mark.skipif(
    importlib.util.find_spec("csfront") is None,
    reason="frontend package not installed",
)


def test_frontend_phonemize_through_neural_backend(checkpoint):
    backend_cmd = shlex.join(
        [sys.executable, "-m", "neural_lid", "serve", "--checkpoint", str(checkpoint)]
    )
    proc = subprocess.run(
        [sys.executable, "-m", "csfront.cli", "phonemize",
         "--backend", "extern", "--extern-cmd", backend_cmd],
        input="Saya suka coding.\nBesok ada meeting!\n",
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == 2
    for line in lines:
        payload = json.loads(line)
        assert payload["version"] == "1"
        assert payload["words"]
        for word in payload["words"]:
            assert word["lang"] in ("ID", "EN")
            assert word["phones"] or not any(c.isalpha() for c in word["surface"])
