"""Launcher: `mover-service --mock --port 8080` or `python -m mover_service`."""

from __future__ import annotations

import argparse
import os

import uvicorn

from .app import create_app, engine_from_args


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mover-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("MOVER_SERVICE_PORT", "8080")))
    parser.add_argument("--mock", action="store_true",
                        help="serve deterministic mock responses (no model weights)")
    parser.add_argument("--seed", type=int, default=0, help="mock-mode seed")
    parser.add_argument("--infill-model", help="path or name of the infill seq2seq checkpoint")
    parser.add_argument("--classifier-model", help="path or name of the hyperbole classifier")
    parser.add_argument("--paraphrase-model", help="path or name of the paraphrase embedder")
    parser.add_argument("--device", default="cpu")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    app = create_app(engine=engine_from_args(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
