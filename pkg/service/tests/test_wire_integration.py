"""Full-wire checks: a live server process answering real HTTP, and the
engine CLI driving it end to end when installed."""

import json
import shutil
import socket
import subprocess
import sys
import time

import pytest
import requests


def free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def server():
    port = free_port()
    process = subprocess.Popen(
        [sys.executable, "-m", "mover_service", "--mock", "--seed", "3",
         "--port", str(port)],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    base = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            try:
                if requests.get(f"{base}/health", timeout=1).status_code == 200:
                    break
            except requests.RequestException:
                time.sleep(0.1)
        else:
            raise RuntimeError("service did not come up")
        yield base
    finally:
        process.terminate()
        process.wait(timeout=10)


def test_endpoints_over_real_http(server):
    body = requests.post(f"{server}/infill",
                         json={"masked": "The hill is <mask> .", "num_return": 2},
                         timeout=5).json()
    assert len(body["candidates"]) == 2
    score = requests.post(f"{server}/score/hyperbole",
                          json={"text": "The hill is endless ."}, timeout=5).json()["score"]
    assert 0.0 <= score <= 1.0
    tags = requests.post(f"{server}/tag", json={"text": "sweeter than honey"},
                         timeout=5).json()
    assert tags["tags"] == ["JJR", "IN", "NN"]
    assert requests.post(f"{server}/infill", json={"masked": "no mask"},
                         timeout=5).status_code == 422


@pytest.mark.skipif(shutil.which("mover") is None,
                    reason="engine CLI not installed")
def test_engine_cli_generates_through_the_wire(server, tmp_path):
    patterns = tmp_path / "patterns.txt"
    patterns.write_text("JJ\t1\nNN\t1\n")
    literals = tmp_path / "in.txt"
    literals.write_text("The hill is endless .\n")
    out = tmp_path / "out.jsonl"
    result = subprocess.run(
        ["mover", "generate", str(literals), "-o", str(out),
         "--patterns", str(patterns), "--backend", server],
        capture_output=True, timeout=120)
    assert result.returncode == 0, result.stderr.decode()
    row = json.loads(out.read_text().splitlines()[0])
    assert row["literal"] == "The hill is endless ."
    assert row["candidates"] >= 1
    assert row["output"]
