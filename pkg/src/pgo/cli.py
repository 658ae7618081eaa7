"""Thin command-line client for the service.

Subcommands: potential | spectrum | wavefunction | transmission | validate.
The CLI assembles the run configuration from --config and repeated --set
overrides, posts it to the service (in-process ASGI transport by default,
--server URL for a remote instance), and writes the returned documents into
--out. Exit codes: 0 success, 1 computation failure, 2 config error.
"""

from __future__ import annotations

import argparse
import asyncio
import dataclasses
import sys
from pathlib import Path

import httpx

from .config import ConfigError, load_config

COMMANDS = ("potential", "spectrum", "wavefunction", "transmission", "validate")

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_CONFIG = 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgo",
        description="Pseudo-Gaussian oscillator tables: spectra, eigenfunctions, "
        "barrier transmission and cross-validation reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"emit the {name} document(s)")
        p.add_argument("--config", metavar="PATH", default=None,
                       help="flat key = value config file")
        p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                       dest="overrides", help="override one config key (repeatable)")
        p.add_argument("--out", metavar="DIR", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="table format (default csv)")
        p.add_argument("--server", metavar="URL", default=None,
                       help="remote service URL (default: in-process service)")
    return parser


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    """POST to a remote server, or to the in-process service over ASGI."""

    async def _go() -> httpx.Response:
        if server:
            transport = None
            base = server
        else:
            from .service.app import app  # lazy: only the default path needs it

            transport = httpx.ASGITransport(app=app)
            base = "http://pgo.internal"
        async with httpx.AsyncClient(
            transport=transport, base_url=base, timeout=600.0
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(_go())


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        if args.format is not None:
            cfg = dataclasses.replace(cfg, format=args.format)
    except ConfigError as exc:
        print(f"pgo: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    payload = cfg.as_dict()
    payload.pop("out_dir", None)
    payload["levels"] = list(cfg.levels)
    out_dir = Path(args.out if args.out != "." else cfg.out_dir)
    try:
        resp = _post(args.server, f"/v1/{args.command}", payload)
    except httpx.HTTPError as exc:
        print(f"pgo: service unreachable: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    if resp.status_code in (400, 422):
        print(f"pgo: config rejected: {resp.text}", file=sys.stderr)
        return EXIT_CONFIG
    if resp.status_code == 409:
        print(f"pgo: computation failed: {resp.text}", file=sys.stderr)
        return EXIT_COMPUTATION
    if resp.status_code != 200:
        print(f"pgo: unexpected service response {resp.status_code}: {resp.text}",
              file=sys.stderr)
        return EXIT_COMPUTATION
    body = resp.json()
    out_dir.mkdir(parents=True, exist_ok=True)
    for document in body["files"]:
        path = out_dir / document["filename"]
        path.write_text(document["content"], encoding="utf-8")
        print(f"pgo: wrote {path}")
        if "# warning" in document["content"] or '"warning"' in document["content"]:
            print(f"pgo: warning noted in {document['filename']}", file=sys.stderr)
    if not body.get("ok", True):
        print("pgo: validation reported hard failures", file=sys.stderr)
        return EXIT_COMPUTATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
