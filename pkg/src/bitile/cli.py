"""Command-line entry point.

Exit status: 0 on success, 1 on a domain error (error JSON on stdout),
2 on a usage error or an unreadable input file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import patterns
from .arithmetic import compute_parameters, threshold
from .complete import factor_complete, kuw_almost_tiling, kuw_deficit_tiling
from .constructions import admissible_m, extremal_construction, verify_no_factor
from .errors import BitileError, DivisibilityViolation, InstanceTooLarge
from .experiments import scan_threshold
from .extremal import DenseEmbedConfig, tile_extremal
from .graph import HostGraph, host_from_json, tile_graph_from_json
from .regularity import check_regular_exact, check_regular_sampled, check_super_regular
from .solver import SolveBudget, max_h_tiling, solve_factor
from .solver.api import default_time_limit

log = logging.getLogger("bitile")


class UsageError(Exception):
    """Bad flags or unreadable inputs; maps to exit status 2."""


def _read_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as err:
        raise UsageError(f"{path}: not valid JSON ({err})") from err


def load_pattern(ref: str):
    """A pattern file path, or ``catalog:NAME`` for a built-in pattern."""
    if ref.startswith("catalog:"):
        try:
            return patterns.get(ref.split(":", 1)[1])
        except KeyError as err:
            raise UsageError(err.args[0]) from err
    return tile_graph_from_json(_read_json(ref))


def load_host(path: str) -> HostGraph:
    """A host file, or any artifact that carries one under ``"host"`` (e.g. a witness)."""
    data = _read_json(path)
    if "edges" not in data and isinstance(data.get("host"), dict):
        data = data["host"]
    return host_from_json(data)


def parse_ids(text: str) -> list[int]:
    """``"0,1,5-8"`` -> ``[0, 1, 5, 6, 7, 8]``."""
    out = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        lo, sep, hi = part.partition("-")
        try:
            out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
        except ValueError as err:
            raise argparse.ArgumentTypeError(f"bad vertex list {text!r}") from err
    return out


def parse_grid(text: str) -> list[int]:
    return parse_ids(text)


def _budget(args) -> SolveBudget:
    secs = args.budget_secs if args.budget_secs is not None else default_time_limit()
    return SolveBudget(node_limit=args.budget_nodes, time_limit=secs, workers=args.workers)


def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-nodes", type=int, default=10_000_000)
    p.add_argument("--budget-secs", type=float, default=None,
                   help="solver time limit (default: $BITILE_BUDGET_SECS or 60)")
    p.add_argument("--workers", type=int, default=1)


# ---------------------------------------------------------------------------
# subcommands; each returns (json payload, dot text or None, csv text or None)


def cmd_analyze(args):
    H = load_pattern(args.pattern)
    out = compute_parameters(H).to_json()
    if args.n is not None:
        th = threshold(H, args.n)
        out["threshold"] = {"n": args.n, "value": str(th.value), "degree": th.degree,
                            "regime": th.regime, "lower_bound": str(th.lower_bound)}
    return out, H.to_dot(), None


def cmd_construct(args):
    H = load_pattern(args.pattern)
    try:
        witness = extremal_construction(H, args.m)
    except DivisibilityViolation as err:
        valid = [m for m in admissible_m(H, max(args.m, 1) + 2 * H.h) if m >= args.m]
        if valid:
            raise DivisibilityViolation(f"{err.detail}; smallest valid m >= {args.m} is {valid[0]}") from err
        raise
    out = witness.to_json()
    if args.verify:
        try:
            out["verification"] = verify_no_factor(witness, H, _budget(args)).to_json()
        except InstanceTooLarge as err:
            out["verification"] = {**err.report.to_json(), "skipped": err.detail}
    return out, witness.host.to_dot(), None


def cmd_tile_complete(args):
    H = load_pattern(args.pattern)
    result = factor_complete(H, args.m, args.t, mirror=not args.no_mirror)
    return result.to_json(), None, None


def cmd_almost_tile(args):
    if args.c is not None:
        if args.m is None:
            raise UsageError("--c needs --m")
        result, report = kuw_deficit_tiling(args.u, args.w, args.m, args.c)
    else:
        if args.x is None or args.y is None:
            raise UsageError("almost-tile needs --x and --y (or --m and --c)")
        result, report = kuw_almost_tiling(args.u, args.w, args.x, args.y)
    out = result.to_json()
    out["report"] = report.to_json()
    return out, None, None


def cmd_tile_extremal(args):
    G = load_host(args.host)
    H = load_pattern(args.pattern)
    if args.asymptotic:
        config = DenseEmbedConfig.asymptotic(H, args.rho)
    else:
        config = DenseEmbedConfig.for_pattern(H, args.rho, args.alpha, args.theta)
    result = tile_extremal(G, H, args.A, args.B, config, check_degree=not args.skip_degree_check)
    return result.to_json(), None, None


def cmd_solve(args):
    G = load_host(args.host)
    H = load_pattern(args.pattern)
    budget = _budget(args)
    if args.max:
        result = max_h_tiling(G, H, budget, backend=args.backend)
    else:
        result = solve_factor(G, H, budget, backend=args.backend)
    return result.to_json(), None, None


def cmd_check_regular(args):
    G = load_host(args.host)
    if args.delta is not None:
        out = check_super_regular(G, args.X, args.Y, args.eps, args.delta,
                                  trials=args.trials or 2000, seed=args.seed).to_json()
    elif args.trials and not args.exact:
        out = check_regular_sampled(G, args.X, args.Y, args.eps, args.trials, seed=args.seed,
                                    strategy=args.strategy).to_json()
    else:
        out = check_regular_exact(G, args.X, args.Y, args.eps).to_json()
    return out, None, None


def cmd_scan(args):
    H = load_pattern(args.pattern)
    report = scan_threshold(H, args.n_grid, chains=args.chains, budget=_budget(args),
                            seed=args.seed, workers=args.workers)
    out = report.to_json()
    text = report.to_csv()
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "scan.json").write_text(_dump(out))
        (d / "scan.csv").write_text(text)
        if args.dot:
            for row in report.rows:
                if row.frontier is not None:
                    (d / f"frontier_n{row.n}.dot").write_text(row.frontier.to_dot(f"frontier_n{row.n}"))
    return out, None, text


COMMANDS = {
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "tile-complete": cmd_tile_complete,
    "almost-tile": cmd_almost_tile,
    "tile-extremal": cmd_tile_extremal,
    "solve": cmd_solve,
    "check-regular": cmd_check_regular,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="key = value file mirroring the flags")
    common.add_argument("--format", choices=("json", "csv", "dot"), default="json")
    common.add_argument("-o", "--output", help="write the artifact here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="bitile", description="Bipartite H-tiling toolkit.",
                                     allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], allow_abbrev=False, help=text)

    p = command("analyze", "pattern parameters")
    p.add_argument("pattern", help="pattern JSON or catalog:NAME")
    p.add_argument("--n", type=int, help="also report the degree threshold at this side size")

    p = command("construct", "no-factor witness host")
    p.add_argument("pattern")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="certify absence with the exact solver")
    _add_budget(p)

    p = command("tile-complete", "H-factor of a complete host")
    p.add_argument("pattern")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--no-mirror", action="store_true")

    p = command("almost-tile", "K_{u,w} almost-tiling of a complete host")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--c", type=int)

    p = command("tile-extremal", "H-factor of a near-extremal host")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--A", type=parse_ids, required=True)
    p.add_argument("--B", type=parse_ids, required=True)
    p.add_argument("--alpha")
    p.add_argument("--rho")
    p.add_argument("--theta")
    p.add_argument("--asymptotic", action="store_true", help="derive alpha and theta from rho")
    p.add_argument("--skip-degree-check", action="store_true")

    p = command("solve", "exact H-factor or maximum tiling")
    p.add_argument("host")
    p.add_argument("pattern")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--factor", action="store_true", help="decide an H-factor (default)")
    mode.add_argument("--max", action="store_true", help="maximum H-tiling")
    p.add_argument("--backend", choices=("cython", "python"))
    _add_budget(p)

    p = command("check-regular", "epsilon-regularity of a pair")
    p.add_argument("host")
    p.add_argument("--X", type=parse_ids, required=True)
    p.add_argument("--Y", type=parse_ids, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--delta")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--trials", type=int)
    p.add_argument("--strategy", choices=("adversarial", "uniform"), default="adversarial")

    p = command("scan", "empirical degree threshold scan")
    p.add_argument("pattern")
    p.add_argument("--n-grid", type=parse_grid, required=True)
    p.add_argument("--chains", type=int, default=3)
    p.add_argument("--out-dir", help="write scan.json and scan.csv here")
    p.add_argument("--dot", action="store_true", help="with --out-dir, dump frontier hosts as DOT")
    _add_budget(p)
    return parser


def read_config(path: str) -> dict[str, str]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    out = {}
    for lineno, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        out[key.strip().lstrip("-").replace("_", "-")] = value.strip()
    return out


def _config_tokens(sub: argparse.ArgumentParser, config: dict[str, str]) -> list[str]:
    """Turn config entries into flags; unknown keys are usage errors."""
    flags = {}
    for action in sub._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                flags[opt[2:]] = action
    tokens = []
    for key, value in config.items():
        if key == "config":
            continue
        action = flags.get(key)
        if action is None:
            raise UsageError(f"config key {key!r} is not a flag of this command")
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(f"--{key}")
        else:
            tokens += [f"--{key}", value]
    return tokens


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = next((a for a in argv if a in COMMANDS), None)
    if known.config and command:
        sub = parser._subparsers._group_actions[0].choices[command]
        # config tokens go first so that explicit flags win
        i = argv.index(command)
        argv = argv[: i + 1] + _config_tokens(sub, read_config(known.config)) + argv[i + 1:]
    return parser.parse_args(argv)


def _dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as err:
        print(f"bitile: error: {err}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        payload, dot, table = COMMANDS[args.command](args)
    except UsageError as err:
        print(f"bitile: error: {err}", file=sys.stderr)
        return 2
    except BitileError as err:
        log.info("domain error in %s: %s", args.command, err)
        sys.stdout.write(_dump(err.to_json()))
        return 1
    if args.format == "dot":
        if dot is None:
            print(f"bitile: error: --format dot is not available for {args.command}", file=sys.stderr)
            return 2
        _emit(dot, args.output)
    elif args.format == "csv":
        if table is None:
            print(f"bitile: error: --format csv is not available for {args.command}", file=sys.stderr)
            return 2
        _emit(table, args.output)
    else:
        _emit(_dump(payload), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
