"""Command-line client for the experiment service.

All heavy lifting happens behind the HTTP API; the CLI only loads the
config file, posts a request, and writes the returned tables to CSV. By
default the service app is mounted in-process, so no server is needed;
``--server`` points the same commands at a running instance instead.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from .harness import (
    CurveTable,
    RunResult,
    SummaryRow,
    write_curves_csv,
    write_runs_csv,
    write_summary_csv,
)


class ServiceClient:
    """Posts requests either to a remote server or to the app mounted in-process."""

    def __init__(self, server: str | None):
        self.server = server

    def post(self, url: str, payload: dict) -> dict:
        if self.server is not None:
            with httpx.Client(base_url=self.server, timeout=600.0) as client:
                response = client.post(url, json=payload)
        else:
            response = asyncio.run(self._post_in_process(url, payload))
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise SystemExit(f"error: {url} failed ({response.status_code}): {detail}")
        return response.json()

    @staticmethod
    async def _post_in_process(url: str, payload: dict) -> httpx.Response:
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://koopman.local", timeout=600.0
        ) as client:
            return await client.post(url, json=payload)


def _load_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise SystemExit(f"error: config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise SystemExit(f"error: config file {path} is not valid JSON: {exc}")


def _out_dir(args: argparse.Namespace, config: dict) -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(config.get("out_dir") or ".")


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    payload = {"config": config, "seed": args.seed, "sigma_t": args.sigma_t}
    body = ServiceClient(args.server).post("/experiments/run", payload)
    results = [RunResult.model_validate(r) for r in body["results"]]
    out = _out_dir(args, config)
    write_runs_csv(results, out / "runs.csv")
    ok = sum(1 for r in results if r.status == "ok")
    print(f"wrote {out / 'runs.csv'} ({len(results)} rows, {ok} ok)")
    for r in results:
        err = "failed" if r.error is None else f"{r.error:.6g}"
        print(f"  sigma_t={r.sigma_t:g} {r.method}/{r.observable}: error={err}")
    return 0


def cmd_mc(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    payload = {"config": config, "seed": args.seed}
    body = ServiceClient(args.server).post("/experiments/monte-carlo", payload)
    runs = [RunResult.model_validate(r) for r in body["runs"]]
    summary = [SummaryRow.model_validate(s) for s in body["summary"]]
    out = _out_dir(args, config)
    write_runs_csv(runs, out / "runs.csv")
    write_summary_csv(summary, out / "summary.csv")
    print(f"wrote {out / 'runs.csv'} ({len(runs)} rows) and {out / 'summary.csv'} ({len(summary)} groups)")
    for s in summary:
        med = "n/a" if s.median is None else f"{s.median:.6g}"
        print(f"  sigma_t={s.sigma_t:g} {s.method}/{s.observable}: median={med} (n={s.count}, failures={s.failures})")
    return 0


def cmd_curves(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    payload = {"config": config, "seed": args.seed, "sigma_t": args.sigma_t}
    body = ServiceClient(args.server).post("/experiments/curves", payload)
    table = CurveTable.model_validate(body)
    out = _out_dir(args, config)
    write_curves_csv(table, out / "curves.csv")
    print(f"wrote {out / 'curves.csv'} ({len(table.rows)} rows, columns: {', '.join(table.columns)})")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("koopman.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koopman",
        description="Koopman operator estimation experiments (thin client of the HTTP service).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, need_seed: bool = False) -> None:
        p.add_argument("--config", required=True, help="path to a JSON experiment config")
        p.add_argument("--seed", type=int, required=need_seed, default=None,
                       help="master seed (overrides the config's seed)")
        p.add_argument("--out", default=None,
                       help="output directory for CSV files (default: config out_dir or '.')")
        p.add_argument("--server", default=None,
                       help="base URL of a running service; defaults to in-process execution")

    p_run = sub.add_parser("run", help="run each noise scenario once and write runs.csv")
    add_common(p_run)
    p_run.add_argument("--sigma-t", dest="sigma_t", type=float, default=None,
                       help="run only the scenario with this noise level")
    p_run.set_defaults(func=cmd_run)

    p_mc = sub.add_parser("mc", help="full Monte Carlo sweep; writes runs.csv and summary.csv")
    add_common(p_mc)
    p_mc.set_defaults(func=cmd_mc)

    p_curves = sub.add_parser("curves", help="grid reconstruction curves; writes curves.csv")
    add_common(p_curves, need_seed=True)
    p_curves.add_argument("--sigma-t", dest="sigma_t", type=float, default=None,
                          help="noise level for the curves (default: first configured scenario)")
    p_curves.set_defaults(func=cmd_curves)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
