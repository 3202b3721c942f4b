"""Command-line client for the experiment harness.

Runs experiments in-process by default; point --server at a running
service instance to execute there instead.  Either path produces the
same CSV bytes for the same config and seed.
"""

from __future__ import annotations

import argparse
import sys

import httpx

from .harness import (
    EXPERIMENT_MODELS,
    ConfigError,
    DEFAULT_PLOTS,
    ExperimentResult,
    emit_plot,
    load_config,
    run_experiment,
    write_result,
)

COMMANDS = {
    "ber-sweep": "ber_sweep",
    "interleave-compare": "interleaver_compare",
    "mac-compare": "mac_compare",
    "snr-map": "snr_map",
    "codec-table": "codec_table",
}

COMMAND_HELP = {
    "ber-sweep": "Monte-Carlo bit error rate over an SNR grid",
    "interleave-compare": "interleaver ranking under burst noise",
    "mac-compare": "MAC protocol comparison by discrete-event simulation",
    "snr-map": "SNR over a distance/frequency grid",
    "codec-table": "length-15 BCH code parameters and octal generators",
}


def _parse_seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed {text!r} is not an integer") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit int")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uwacomm",
        description="underwater acoustic DS-CDMA link and MAC simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMAND_HELP.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", metavar="<path>", help="YAML config file")
        sp.add_argument("--seed", metavar="<u64>", type=_parse_seed, default=0)
        sp.add_argument("--out", metavar="<dir>", default="results")
        sp.add_argument("--plots", action="store_true",
                        help="also render the default SVG plot")
        sp.add_argument("--server", metavar="<url>",
                        help="run on a service instance instead of in-process")
    return parser


def _one_line(exc: object) -> str:
    return " ".join(str(exc).split())


def _run_remote(server: str, command: str, config: dict, seed: int) -> ExperimentResult:
    url = server.rstrip("/") + f"/experiments/{command}"
    resp = httpx.post(url, json={"config": config, "seed": seed}, timeout=600.0)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        if resp.status_code == 422 and str(detail).startswith("config:"):
            raise ConfigError(str(detail)[len("config:"):].strip())
        raise RuntimeError(f"server returned {resp.status_code}: {detail}")
    body = resp.json()
    return ExperimentResult(
        kind=body["kind"],
        columns=body["columns"],
        rows=body["rows"],
        config_hash=body["config_hash"],
        traces={k: [tuple(r) for r in v] for k, v in body.get("traces", {}).items()},
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    kind = COMMANDS[args.command]
    try:
        if args.config:
            cfg = load_config(args.config, kind=kind)
        else:
            cfg = EXPERIMENT_MODELS[kind]()
        if args.server:
            result = _run_remote(
                args.server, args.command, cfg.model_dump(mode="json"), args.seed
            )
        else:
            result = run_experiment(cfg, args.seed)
        if kind == "codec_table":
            # table goes to stdout for eyeballing; files still written below
            print(",".join(result.columns))
            for row in result.rows:
                print(",".join(row))
        paths = write_result(result, args.out)
        if args.plots and kind in DEFAULT_PLOTS:
            paths.append(emit_plot(paths[0], DEFAULT_PLOTS[kind]))
        for path in paths:
            print(path)
        return 0
    except ConfigError as exc:
        print(f"error: config: {_one_line(exc)}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"error: server: {_one_line(exc)}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"error: runtime: {_one_line(exc)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
