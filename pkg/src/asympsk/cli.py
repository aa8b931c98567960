"""Command-line front end writing CSV datasets.

Every output starts with a ``#``-prefixed JSON manifest line holding the
argument vector, seed and package version, so ``asympsk replay FILE``
reproduces the file byte for byte.  Wall-clock information goes to a
``<out>.manifest.json`` sidecar to keep the CSV itself deterministic.

Exit codes: 0 success, 2 invalid arguments, 3 solver non-convergence (the
CSV is still written, with ``converged=false`` rows).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .constellation import Constellation, ConstellationError, PmfError, uniform_pmf, validate_pmf
from .energy import DiodeParams, EnergyParams, dbm_to_watts, scaling_continuous, scaling_discrete
from .info_rate import AwgnChannel, ba_optimal_input, max_mutual_information, mutual_information, output_grid
from .phase_stats import theta_pmf, xi
from .region import EsmTable, esm_table, grad_xi, sweep_region
from .waveform import DEFAULT_SYMBOLS, ConstellationPhase, TxConfig, UniformPhase, monte_carlo_zdc

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 2, 3

SCALING_COLUMNS = ["N", "delta", "zdc_analytic", "zdc_mc", "stderr"]
REGION_TAIL = ["kkt", "converged"]


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# argument parsing helpers

_ANGLE = re.compile(r"^\s*(?P<sign>-)?(?P<num>\d*\.?\d*(?:e-?\d+)?)?\s*\*?\s*(?P<pi>pi)?\s*(?:/\s*(?P<den>\d*\.?\d+))?\s*$")


def parse_angle(text: str) -> float:
    """Radians from ``"pi/3"``, ``"2pi/3"``, ``"0.5"`` or ``"pi"``."""
    m = _ANGLE.match(text.lower())
    if not m or not (m["num"] or m["pi"]):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    v = float(m["num"]) if m["num"] else 1.0
    if m["pi"]:
        v *= np.pi
    if m["den"]:
        v /= float(m["den"])
    return -v if m["sign"] else v


def _list(conv):
    def parse(text: str):
        try:
            return [conv(t) for t in text.split(",") if t.strip()]
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return parse


def parse_rate_grid(text: str):
    """``start:stop:steps``; ``stop`` may be ``max`` for the maximum rate."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("rate grid must be start:stop:steps")
    try:
        start = float(parts[0])
        stop = parts[1].strip().lower()
        stop = stop if stop == "max" else float(stop)
        steps = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate grid {text!r}") from None
    if steps < 1:
        raise argparse.ArgumentTypeError("steps must be >= 1")
    return start, stop, steps


def parse_diode(text: str) -> DiodeParams:
    try:
        i_s, n, v_t = (float(t) for t in text.split(","))
        return DiodeParams(i_s, n, v_t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--diode expects is,n,vt: {exc}") from None


def _common(p: argparse.ArgumentParser, top: bool = False):
    kw = {"default": argparse.SUPPRESS} if not top else {}
    p.add_argument("--seed", type=int, help="64-bit seed for stochastic outputs", **({"default": 0} if top else kw))
    p.add_argument("--out", help="output path (default stdout)", **({"default": None} if top else kw))
    p.add_argument("--threads", type=int, help="worker threads, 0 = auto", **({"default": 0} if top else kw))


def _energy_flags(p: argparse.ArgumentParser, carriers_default: int = 8):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--power-dbm", type=float, default=None, help="average power in dBm (default -20)")
    g.add_argument("--power-watts", type=float, default=None)
    p.add_argument("--carriers", type=int, default=carriers_default)
    p.add_argument("--rs-ohms", type=float, default=50.0)
    p.add_argument("--diode", type=parse_diode, default=None, help="is,n,vt; default uses k2=0.0034, k4=0.3829")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asympsk", description=__doc__.splitlines()[0])
    _common(ap, top=True)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scaling", help="z_DC vs carrier count: scaling law and Monte Carlo")
    s.add_argument("--delta-list", type=_list(parse_angle), default=[0.0, np.pi / 6, np.pi / 3, np.pi])
    s.add_argument("--n-list", type=_list(int), default=[2**k for k in range(11)])
    s.add_argument("--symbols", type=int, default=DEFAULT_SYMBOLS)
    s.add_argument("--bandwidth", type=float, default=10e6)
    s.add_argument("--psk-order", type=int, default=None, help="draw phases from uniform M-PSK with each delta instead of U[-delta, delta]")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--power-dbm", type=float, default=None)
    g.add_argument("--power-watts", type=float, default=None)
    s.add_argument("--rs-ohms", type=float, default=50.0)
    s.add_argument("--diode", type=parse_diode, default=None)
    _common(s)

    s = sub.add_parser("capacity", help="mutual information vs SNR")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--delta-list", type=_list(parse_angle), default=[np.pi / 12, np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2, np.pi])
    s.add_argument("--snr-db-list", type=_list(float), default=list(range(-10, 31, 2)))
    s.add_argument("--input", choices=["uniform", "ba"], default="uniform")
    _common(s)

    for name, helptext in (("region", "rate-energy boundary by SQP"), ("esm", "rate-energy boundary by exhaustive lattice search")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--m", type=int, required=True)
        s.add_argument("--delta", type=parse_angle, required=True)
        s.add_argument("--snr-db", type=float, required=True)
        s.add_argument("--rate-grid", type=parse_rate_grid, default=(0.0, "max", 21))
        _energy_flags(s)
        if name == "esm":
            s.add_argument("--step", type=float, default=0.02)
        _common(s)

    s = sub.add_parser("pmf", help="p.m.f. of the fourth-order phase combination and xi")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--delta", type=parse_angle, required=True)
    s.add_argument("--probs", type=_list(float), default=None, help="comma-separated p.m.f. (default uniform)")
    _common(s)

    s = sub.add_parser("gradcheck", help="analytic vs finite-difference gradients")
    s.add_argument("--m-list", type=_list(int), default=[4, 8])
    s.add_argument("--delta", type=parse_angle, default=np.pi / 4)
    s.add_argument("--snr-db", type=float, default=10.0)
    s.add_argument("--points", type=int, default=20)
    _common(s)

    s = sub.add_parser("replay", help="re-run the command recorded in a CSV manifest")
    s.add_argument("file")
    _common(s)
    return ap


# --------------------------------------------------------------------------
# shared plumbing


def _energy(args, N: int) -> EnergyParams:
    if args.power_watts is not None:
        P = args.power_watts
    else:
        P = dbm_to_watts(-20.0 if args.power_dbm is None else args.power_dbm)
    if args.diode is not None:
        return EnergyParams.from_diode(args.diode, R_s=args.rs_ohms, P=P, N=N)
    return EnergyParams(R_s=args.rs_ohms, P=P, N=N)


def _threads(args) -> int:
    return args.threads if args.threads > 0 else (os.cpu_count() or 1)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_csv(manifest: dict, columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(manifest, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".asympsk-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_manifest(path: str) -> dict:
    with open(path) as fh:
        first = fh.readline()
    if not first.startswith("# "):
        raise UsageError(f"{path} has no manifest line")
    return json.loads(first[2:])


def _strip_out(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        if a.startswith("--out="):
            continue
        out.append(a)
    return out


# --------------------------------------------------------------------------
# subcommands; each returns (columns, rows, exit_code, notes)


def cmd_scaling(args):
    if args.symbols < 1:
        raise UsageError("--symbols must be >= 1")
    if any(n < 1 for n in args.n_list):
        raise UsageError("--n-list entries must be >= 1")
    if any(not (0 <= d <= np.pi) for d in args.delta_list):
        raise UsageError("deltas must lie in [0, pi]")
    if args.psk_order is not None and any(d == 0 for d in args.delta_list):
        raise UsageError("--psk-order needs deltas in (0, pi]")
    tasks = [(d, N) for d in args.delta_list for N in args.n_list]
    root = np.random.SeedSequence(args.seed)
    seeds = root.spawn(len(tasks))

    psk = {}
    if args.psk_order is not None:
        psk = {d: Constellation(args.psk_order, d) for d in args.delta_list}

    def run(i):
        d, N = tasks[i]
        e = _energy(args, N)
        if psk:
            c = psk[d]
            source = ConstellationPhase(c, uniform_pmf(c.M))
            analytic = scaling_discrete(xi(uniform_pmf(c.M), c), e)
        else:
            source, analytic = UniformPhase(d), scaling_continuous(d, e)
        cfg = TxConfig(N=N, P=e.P, phase_source=source, bandwidth=args.bandwidth, num_symbols=args.symbols)
        mc = monte_carlo_zdc(cfg, e, np.random.default_rng(seeds[i]))
        return {"N": N, "delta": d, "zdc_analytic": analytic * 1e6, "zdc_mc": mc.zdc * 1e6, "stderr": mc.stderr * 1e6}

    with ThreadPoolExecutor(_threads(args)) as ex:
        rows = list(ex.map(run, range(len(tasks))))
    notes = {"units": "uA"}
    if args.symbols == 1:
        notes["warning"] = "single symbol period: high-variance estimate, stderr undefined"
    return SCALING_COLUMNS, rows, EXIT_OK, notes


def cmd_capacity(args):
    M = args.m
    tasks = [(d, s) for d in args.delta_list for s in args.snr_db_list]
    for d, _ in tasks:
        Constellation(M, d)

    def run(task):
        d, snr_db = task
        c = Constellation(M, d)
        ch = AwgnChannel.from_db(snr_db)
        p = uniform_pmf(M) if args.input == "uniform" else ba_optimal_input(c, ch)[1]
        row = {"delta": d, "snr_db": snr_db, "rate_bits": mutual_information(p, c, ch)}
        row.update({f"p{m}": float(v) for m, v in enumerate(p)})
        return row

    with ThreadPoolExecutor(_threads(args)) as ex:
        rows = list(ex.map(run, tasks))
    cols = ["delta", "snr_db", "rate_bits"] + [f"p{m}" for m in range(M)]
    return cols, rows, EXIT_OK, {"input": args.input}


def _region_setup(args):
    c = Constellation(args.m, args.delta)
    ch = AwgnChannel.from_db(args.snr_db)
    e = _energy(args, args.carriers)
    start, stop, steps = args.rate_grid
    max_rate, _ = max_mutual_information(c, ch)
    stop = max_rate if stop == "max" else stop
    if start < 0 or stop < start or stop > np.log2(args.m):
        raise UsageError(f"rate grid must satisfy 0 <= start <= stop <= log2 M, got {start}:{stop}")
    return c, ch, e, np.linspace(start, stop, steps), max_rate


def _region_columns(M):
    return ["R", "achieved_rate", "xi", "zdc_uA"] + [f"p{m}" for m in range(M)] + REGION_TAIL


def cmd_region(args):
    c, ch, e, grid, max_rate = _region_setup(args)
    pts = sweep_region(grid, c, ch, e)
    code = EXIT_OK if all(p.converged for p in pts) else EXIT_SOLVER
    return _region_columns(c.M), [p.row() for p in pts], code, {"max_rate": max_rate}


def cmd_esm(args):
    c, ch, e, grid, max_rate = _region_setup(args)
    table: EsmTable = esm_table(c, ch, args.step)
    pts = [table.best(float(R), e) for R in grid]
    code = EXIT_OK if all(p.converged for p in pts) else EXIT_SOLVER
    return _region_columns(c.M), [p.row() for p in pts], code, {"max_rate": max_rate, "lattice_points": len(table.lattice)}


def cmd_pmf(args):
    c = Constellation(args.m, args.delta)
    p = uniform_pmf(c.M) if args.probs is None else validate_pmf(args.probs, c.M)
    dist = theta_pmf(p, c)
    xi_val = dist.xi
    rows = [{"k": k, "theta": t, "prob": q, "xi": xi_val} for k, (t, q) in enumerate(zip(dist.support, dist.probs))]
    return ["k", "theta", "prob", "xi"], rows, EXIT_OK, {}


def gradcheck_errors(M: int, delta: float, snr_db: float, points: int, rng: np.random.Generator):
    """Max relative errors of the analytic ``xi`` and entropy gradients vs central differences."""
    c = Constellation(M, delta)
    ch = AwgnChannel.from_db(snr_db)
    grid = output_grid(c, ch)
    from .phase_stats import xi_unchecked

    worst_xi = worst_h = 0.0
    for _ in range(points):
        p = rng.dirichlet(np.ones(M))
        g = grad_xi(p, c)
        fd = np.array([(xi_unchecked(p + h, c) - xi_unchecked(p - h, c)) / 2e-6 for h in np.eye(M) * 1e-6])
        worst_xi = max(worst_xi, np.max(np.abs(g - fd)) / np.max(np.abs(fd)))
        gh = grid.entropy_grad(p)
        fd = np.array([(grid.entropy(p + h) - grid.entropy(p - h)) / 2e-5 for h in np.eye(M) * 1e-5])
        worst_h = max(worst_h, np.max(np.abs(gh - fd)) / np.max(np.abs(fd)))
    return float(worst_xi), float(worst_h)


def cmd_gradcheck(args):
    rng = np.random.default_rng(args.seed)
    rows = []
    for M in args.m_list:
        ex, eh = gradcheck_errors(M, args.delta, args.snr_db, args.points, rng)
        rows.append({"quantity": "xi", "M": M, "max_rel_err": ex})
        rows.append({"quantity": "entropy", "M": M, "max_rel_err": eh})
    return ["quantity", "M", "max_rel_err"], rows, EXIT_OK, {}


COMMANDS = {
    "scaling": cmd_scaling,
    "capacity": cmd_capacity,
    "region": cmd_region,
    "esm": cmd_esm,
    "pmf": cmd_pmf,
    "gradcheck": cmd_gradcheck,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "replay":
        try:
            manifest = read_manifest(args.file)
        except (OSError, ValueError) as exc:
            print(f"asympsk: {exc}", file=sys.stderr)
            return EXIT_USAGE
        replay = manifest["argv"] + (["--out", args.out] if args.out else [])
        return main(replay)

    t0 = time.time()
    try:
        columns, rows, code, notes = COMMANDS[args.command](args)
    except (UsageError, ConstellationError, PmfError, ValueError) as exc:
        print(f"asympsk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    manifest = {
        "command": args.command,
        "argv": _strip_out(argv),
        "seed": args.seed,
        "version": __version__,
        "params": {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in ("out", "threads")},
    }
    manifest.update(notes)
    text = render_csv(manifest, columns, rows)
    if args.out:
        write_atomic(args.out, text)
        side = {"manifest": manifest, "wall_clock": time.strftime("%Y-%m-%dT%H:%M:%S%z"), "elapsed_s": time.time() - t0}
        write_atomic(args.out + ".manifest.json", json.dumps(side, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)
    if code == EXIT_SOLVER:
        print(f"asympsk {args.command}: some points did not converge", file=sys.stderr)
    return code


def _jsonable(v):
    if isinstance(v, DiodeParams):
        return [v.i_s, v.n, v.v_t]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


if __name__ == "__main__":
    sys.exit(main())
