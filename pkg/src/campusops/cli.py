"""Command-line entry point: serve the portal and drive the measurement harness."""

from __future__ import annotations

import argparse
import json
import sys

from .config import FIXTURES_DIR, Config
from .errors import DomainError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="harness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the portal server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    seed = sub.add_parser("seed", help="seed a deterministic dataset")
    seed.add_argument("--profile", choices=("small", "demo"), default="small")
    seed.add_argument("--force", action="store_true", help="reset non-empty storage")

    measure = sub.add_parser("measure", help="measure payload and latency per operation")
    measure.add_argument("--base-url", default="http://127.0.0.1:8000")
    measure.add_argument("--samples", type=int, default=50)
    measure.add_argument("--ops", default=str(FIXTURES_DIR / "measure_ops.txt"))
    measure.add_argument("--manifest", default=None, help="seed manifest (default: next to the db)")
    measure.add_argument("--username", default="admin")
    measure.add_argument("--password", default="campus123")
    measure.add_argument("--out", default="measure_samples.txt")

    report = sub.add_parser("report", help="render the table for a samples file")
    report.add_argument("run_file")

    race = sub.add_parser("race", help="concurrent issuance exercise")
    race.add_argument("--item", type=int, required=True)
    race.add_argument("--concurrency", type=int, default=20)
    race.add_argument("--base-url", default="http://127.0.0.1:8000")
    race.add_argument("--username", default="inv_mgr")
    race.add_argument("--password", default="campus123")

    args = parser.parse_args(argv)
    cfg = Config.from_env()

    try:
        if args.command == "serve":
            import uvicorn

            from .web import create_app

            uvicorn.run(create_app(cfg), host=args.host, port=args.port, log_level="warning")
            return 0

        if args.command == "seed":
            from .harness import seeding

            manifest = seeding.seed(cfg, args.profile, force=args.force)
            print(f"seeded profile {args.profile!r} into {cfg.database_path}")
            for table, n in manifest["counts"].items():
                print(f"  {table:<22} {n}")
            print(f"manifest: {seeding.manifest_path(cfg)}")
            print(f"accounts: admin / inv_mgr / hk_mgr / sup01.. / ct01..  password: {manifest['password']}")
            return 0

        if args.command == "measure":
            from .harness import measuring, reporting, seeding

            manifest_file = args.manifest or str(seeding.manifest_path(cfg))
            with open(manifest_file, encoding="utf-8") as fh:
                manifest = json.load(fh)
            ops = measuring.resolve_ops(measuring.load_ops(args.ops), manifest)
            client = measuring.login_client(args.base_url, args.username, args.password)
            try:
                runs = measuring.measure(client, ops, samples=args.samples)
            finally:
                client.close()
            measuring.write_samples(runs, args.out)
            print(reporting.render_report(runs), end="")
            print(f"samples: {args.out}")
            return 0

        if args.command == "report":
            from .harness import reporting

            print(reporting.render_report(reporting.load_samples(args.run_file)), end="")
            return 0

        if args.command == "race":
            from .harness import racing

            outcome = racing.race(
                args.base_url, args.item, args.concurrency, args.username, args.password
            )
            print(json.dumps(outcome, indent=2))
            return 0
    except DomainError as err:
        print(f"error [{err.code}]: {err.message}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
