"""Command line entry points: tournament simulation, transcript replay, and
the game server.

    dixit simulate --config tournament.json [--games N] [--seed S] --out DIR
    dixit replay TRANSCRIPT
    dixit serve --config server.json [--host H] [--port P]
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import DixitError
from .tournament import TournamentConfig, run_tournament
from .transcript import replay


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="dixit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a seeded bot tournament")
    p_sim.add_argument("--config", required=True, help="tournament config JSON")
    p_sim.add_argument("--games", type=int, help="override the configured game count")
    p_sim.add_argument("--seed", type=int, help="override the configured master seed")
    p_sim.add_argument("--out", required=True, help="directory for transcripts and reports")

    p_rep = sub.add_parser("replay", help="replay a transcript and verify its outcome")
    p_rep.add_argument("transcript", help="transcript JSONL file")

    p_srv = sub.add_parser("serve", help="run the networked game server")
    p_srv.add_argument("--config", required=True, help="server config JSON")
    p_srv.add_argument("--host")
    p_srv.add_argument("--port", type=int)

    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _simulate(args)
        if args.command == "replay":
            return _replay(args)
        return _serve(args)
    except (DixitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _simulate(args: argparse.Namespace) -> int:
    config = TournamentConfig.from_file(args.config)
    if args.games is not None:
        config = dataclasses.replace(config, games=args.games)
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    report = run_tournament(config, args.out)
    print(report.to_table())
    print(f"\ntranscripts and reports written to {args.out}")
    return 0


def _replay(args: argparse.Namespace) -> int:
    state = replay(args.transcript)
    print(f"replay OK: {args.transcript}")
    print(f"rounds played: {state.round_index + 1}")
    print(f"final scores:  {state.scores}")
    print(f"winners:       {state.winners}")
    return 0


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server.app import ServerConfig, create_app

    config = ServerConfig.from_file(args.config)
    if args.host:
        config = dataclasses.replace(config, host=args.host)
    if args.port:
        config = dataclasses.replace(config, port=args.port)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
