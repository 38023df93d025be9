"""Command-line client for the resonator computations.

Verbs map one-to-one onto the service endpoints: ``spectrum``,
``resonances``, ``fields``, ``couplings`` and ``sweep`` read a JSON
config, ``preset <name>`` runs a bundled configuration, ``serve`` starts
the HTTP service.  Jobs run in-process by default; with ``--server`` the
request is posted to a running service instead.

Exit codes: 0 success, 1 configuration error, 2 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import ValidationError

from . import __version__
from .errors import InvalidInputError, MulticavError
from .jobs import JobConfig, SweepConfig, run_job, run_sweep, write_result
from .presets import preset, preset_names

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_COMPUTE = 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=None,
                   help="output file (or directory for multi-file runs)")
    p.add_argument("--format", choices=("csv", "json"), default=None,
                   help="tabular output format (default from config)")
    p.add_argument("--samples-per-fsr", type=int, default=None,
                   help="override the scan density")
    p.add_argument("--server", default=None, metavar="URL",
                   help="post the job to a running service instead of "
                        "computing locally")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multicav",
        description="Optical, optomechanical and emitter-coupling properties "
                    "of multi-element 1D resonators.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for verb in ("spectrum", "resonances", "fields", "couplings"):
        p = sub.add_parser(verb, help=f"compute the {verb} of a stack")
        p.add_argument("--config", type=Path, required=True)
        _add_common(p)
    p = sub.add_parser("sweep", help="common-resonance sweep at fixed total length")
    p.add_argument("--config", type=Path, required=True)
    _add_common(p)
    p = sub.add_parser("preset", help="run a bundled configuration")
    p.add_argument("name", help=f"one of: {', '.join(preset_names())}")
    _add_common(p)
    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _load_config(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


class ConfigError(Exception):
    pass


def _validation_message(path, exc: ValidationError) -> str:
    lines = [f"invalid config {path}:"]
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"  {loc}: {err['msg']}")
    return "\n".join(lines)


def _post_to_server(server: str, verb: str, cfg) -> dict:
    import httpx

    url = server.rstrip("/") + "/" + verb
    resp = httpx.post(url, json=cfg.model_dump(mode="json"), timeout=600.0)
    if resp.status_code >= 400:
        raise MulticavError(f"server returned {resp.status_code}: {resp.text}")
    return resp.json()


def _run_one(cfg, args, as_dir: bool = False) -> list[Path]:
    fmt = args.format or cfg.format
    if args.server:
        if isinstance(cfg, SweepConfig):
            result = _post_to_server(args.server, "sweep", cfg)
        else:
            result = {}
            for verb in cfg.outputs:
                result.update(_post_to_server(args.server, verb, cfg))
    elif isinstance(cfg, SweepConfig):
        result = run_sweep(cfg)
    else:
        result = run_job(cfg)
    out = args.out or (Path(cfg.out) if cfg.out else Path("."))
    sections = [s for s in result if s != "meta"]
    return write_result(result, out, fmt, sections, as_dir=as_dir)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            import uvicorn

            uvicorn.run("multicav.service:app", host=args.host, port=args.port)
            return EXIT_OK
        if args.command == "preset":
            try:
                cfg = preset(args.name)
            except InvalidInputError as exc:
                print(str(exc), file=sys.stderr)
                return EXIT_CONFIG
            if args.samples_per_fsr and isinstance(cfg, JobConfig):
                cfg = cfg.model_copy(update={"samples_per_fsr": args.samples_per_fsr})
            written = _run_one(cfg, args, as_dir=True)
        else:
            raw = _load_config(args.config)
            model = SweepConfig if args.command == "sweep" else JobConfig
            try:
                cfg = model.model_validate(raw)
            except ValidationError as exc:
                print(_validation_message(args.config, exc), file=sys.stderr)
                return EXIT_CONFIG
            if isinstance(cfg, JobConfig):
                update = {"outputs": [args.command]}
                if args.samples_per_fsr:
                    update["samples_per_fsr"] = args.samples_per_fsr
                cfg = cfg.model_copy(update=update)
            written = _run_one(cfg, args)
        for path in written:
            print(path)
        return EXIT_OK
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except MulticavError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
