"""Print canonical responses for a fixed request battery.

Used to check mock determinism across independent process launches:
two invocations with the same seed must emit byte-identical output.
"""

from __future__ import annotations

import argparse
import json

from fastapi.testclient import TestClient

from .app import create_app

BATTERY = [
    ("POST", "/infill", {"masked": "The hill is <mask> tonight .", "num_return": 3}),
    ("POST", "/infill", {"masked": "Her voice was <mask> .", "num_return": 1}),
    ("POST", "/score/hyperbole", {"text": "The hill is endless tonight ."}),
    ("POST", "/score/hyperbole", {"text": "It took you centuries to get dressed ."}),
    ("POST", "/score/paraphrase", {"source": "The hill is big .",
                                   "candidate": "The hill is colossal ."}),
    ("POST", "/tag", {"text": "faster than light"}),
    ("GET", "/health", None),
]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="mover-service-selftest")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    client = TestClient(create_app(seed=args.seed))
    for method, path, body in BATTERY:
        if method == "GET":
            response = client.get(path)
        else:
            response = client.post(path, json=body)
        print(json.dumps({"path": path, "status": response.status_code,
                          "body": response.json()}, sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
