"""Command-line front end.

Every command writes complete files only (write to a temp name, then rename)
and is deterministic for a fixed configuration.  Exit codes: 0 success,
1 computation error (message on stderr), 2 usage error.

`--threads N` bounds the worker threads used by parameter scans; the
CHAOSCOPE_THREADS environment variable is the fallback.  Results are
identical for every thread count; `--threads 1` is the canonical golden path.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .bss import (
    BssError,
    DegreeOverflowError,
    MachineContrast,
    OUT_OF_FUEL,
    UnresolvedRootError,
    components_1d,
    enumerate_paths,
    fragmentation_report,
    load_machine,
    parse_program,
    run,
    serialize_description,
    shipped_machines,
)
from .cycles import BracketError, find_cycle_by_convergence, merge_windows, run_cascade, scan_windows
from .entropy import (
    EntPlusClass,
    LapBudgetError,
    NotMarkovError,
    decide_ent_plus,
    entropy_lap,
    entropy_pl_markov,
    parse_pl_map,
    zero_entropy_boundary,
)
from .lyapunov import (
    classify_exponent,
    exponent_scan,
    lyapunov_generic,
    lyapunov_henon,
    lyapunov_quadratic,
)
from .maps import HenonParams, QuadraticParams
from .srb import EscapedOrbitError, birkhoff_average, estimate_density, histogram_csv

_FLOAT = "{:.17g}".format


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _setup_threads(n: Optional[int]) -> None:
    import numba

    if n is None:
        env = os.environ.get("CHAOSCOPE_THREADS")
        n = int(env) if env else None
    if n is not None:
        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_lyapunov(args) -> int:
    if args.family == "quadratic":
        p = QuadraticParams(args.a)
        if args.generic_starts:
            rng = np.random.default_rng(args.seed)
            starts = rng.uniform(-1.0, 1.0, args.generic_starts)
            lines = ["x0,estimate,sup_estimate"]
            for x0 in starts:
                tr = lyapunov_generic(p, float(x0), args.n)
                lines.append(f"{_FLOAT(x0)},{_FLOAT(tr.estimate)},{_FLOAT(tr.sup_estimate)}")
            out = "\n".join(lines) + "\n"
            if args.out:
                _atomic_write(Path(args.out), out)
            else:
                sys.stdout.write(out)
            return 0
        trace = lyapunov_quadratic(p, args.n)
    else:
        trace = lyapunov_henon(HenonParams(args.a, args.b), n=args.n)
    cls = classify_exponent(
        QuadraticParams(args.a) if args.family == "quadratic" else HenonParams(args.a, args.b),
        budget=max(args.n, 1000),
    )
    print(
        f"estimate={_FLOAT(trace.estimate)} sup_estimate={_FLOAT(trace.sup_estimate)} "
        f"class={cls.name} steps={trace.steps}"
        + (" hit_critical" if trace.hit_critical else "")
        + (" escaped" if trace.escaped else "")
    )
    return 0


def cmd_entropy(args) -> int:
    if args.pl_file:
        m = parse_pl_map(Path(args.pl_file).read_text())
        est = entropy_pl_markov(m)
        print(f"value={_FLOAT(est.value)} method=markov_spectral error_bound={_FLOAT(est.error_bound)}")
        return 0
    est = entropy_lap(QuadraticParams(args.a), args.n_max)
    print(f"value={_FLOAT(est.value)} method=lap_count error_bound={_FLOAT(est.error_bound)}")
    return 0


def cmd_cycles(args) -> int:
    rec = find_cycle_by_convergence(QuadraticParams(args.a), args.max_period, args.budget)
    if rec is None:
        print("no attracting cycle found at this budget")
        return 0
    print(
        f"period={rec.period} point={_FLOAT(rec.point)} "
        f"multiplier={_FLOAT(rec.multiplier)} stability={rec.stability.name}"
    )
    return 0


def cmd_cascade(args) -> int:
    res = run_cascade(args.k_max)
    lines = ["k,period,a"]
    for k, a in enumerate(res.superstable_params, 1):
        lines.append(f"{k},{2 ** k},{_FLOAT(a)}")
    out = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(Path(args.out), out)
    else:
        sys.stdout.write(out)
    print(f"c_estimate={_FLOAT(res.c_estimate)} delta={_FLOAT(res.delta_estimates[-1])}")
    return 0


def cmd_srb(args) -> int:
    hist = estimate_density(QuadraticParams(args.a), args.iterations, args.burn_in, args.bins)
    csv = histogram_csv(hist)
    if args.out:
        _atomic_write(Path(args.out), csv)
    else:
        sys.stdout.write(csv)
    mean = birkhoff_average(QuadraticParams(args.a), "identity", args.iterations, args.burn_in)
    square = birkhoff_average(QuadraticParams(args.a), "square", args.iterations, args.burn_in)
    print(
        f"birkhoff_identity={_FLOAT(mean)} birkhoff_square={_FLOAT(square)}"
        + (" hit_critical" if hist.hit_critical else "")
        + (" restarted" if hist.restarted else "")
    )
    return 0


def cmd_decide(args) -> int:
    cls = decide_ent_plus(args.a, args.depth, args.margin)
    c = zero_entropy_boundary(args.depth)
    print(f"{cls.name} c={c:.7f} margin={args.margin:g}")
    return 0


def _scan_csv(a_values, scan, cycle_periods, entropy_values) -> str:
    lines = ["a,exp_estimate,class,cycle_period,entropy_lap"]
    classes = scan.classes()
    for i, a in enumerate(a_values):
        period = cycle_periods[i]
        ent = entropy_values[i]
        lines.append(
            f"{_FLOAT(a)},{_FLOAT(scan.estimates[i])},{classes[i].name},"
            f"{period if period else ''},{_FLOAT(ent) if not math.isnan(ent) else ''}"
        )
    return "\n".join(lines) + "\n"


def _bifurcation_raster(lo: float, hi: float, columns: int, rows: int) -> str:
    """Plain-text PPM (P3): orbit occupancy over [-1, 1] per parameter."""
    from . import _kernels
    from .maps import ESCAPE_RADIUS

    a_values = np.linspace(lo, hi, columns)
    burn, keep = 600, 6 * rows
    img = np.zeros((rows, columns), dtype=np.int64)
    xs, status = _kernels.quad_orbit_final_grid(a_values, 0.0, burn, ESCAPE_RADIUS)
    x = xs.copy()
    alive = status == 0
    for _ in range(keep):
        x = np.where(alive, 1.0 - a_values * (x * x), 0.0)
        alive &= np.abs(x) <= ESCAPE_RADIUS
        bins = np.clip(((1.0 - x) * 0.5 * rows).astype(np.int64), 0, rows - 1)
        img[bins[alive], np.nonzero(alive)[0]] += 1
    shade = np.zeros_like(img, dtype=np.float64)
    nz = img > 0
    shade[nz] = 1.0 + np.log(img[nz])
    if shade.max() > 0:
        shade /= shade.max()
    gray = (255 * (1.0 - shade)).astype(np.int64)
    lines = ["P3", f"{columns} {rows}", "255"]
    for r in range(rows):
        row = gray[r]
        lines.append(" ".join(f"{v} {v} {v}" for v in row))
    return "\n".join(lines) + "\n"


def cmd_scan(args) -> int:
    if args.grid < 2:
        raise ValueError("grid must be >= 2")
    lo, hi = args.interval
    if args.family == "henon":
        a_values = np.linspace(lo, hi, args.grid)
        lines = ["a,b,exp_estimate,class"]
        for a in a_values:
            p = HenonParams(float(a), args.b)
            tr = lyapunov_henon(p, n=args.budget)
            cls = classify_exponent(p, budget=max(args.budget, 1000))
            lines.append(f"{_FLOAT(a)},{_FLOAT(args.b)},{_FLOAT(tr.estimate)},{cls.name}")
        _atomic_write(Path(args.out), "\n".join(lines) + "\n")
        return 0

    a_values = np.linspace(lo, hi, args.grid)
    scan = exponent_scan(a_values, budget=args.budget)
    hits = dict(
        (a, rec)
        for a, rec in scan_windows((lo, hi), args.grid, args.max_period, args.cycles_budget)
    )
    periods = [hits[a].period if a in hits else 0 for a in a_values]
    ent = np.full(a_values.size, np.nan)
    for i, a in enumerate(a_values):
        try:
            ent[i] = entropy_lap(QuadraticParams(float(a)), args.entropy_depth).value
        except (ValueError, LapBudgetError):
            pass
    _atomic_write(Path(args.out), _scan_csv(a_values, scan, periods, ent))

    if args.raster:
        _atomic_write(Path(args.raster), _bifurcation_raster(lo, hi, min(args.grid, 1024), 400))

    if args.frag_resolutions:
        finest = max(args.frag_resolutions)
        base = np.linspace(lo, hi, finest + 1)
        scans = []
        for res in sorted(args.frag_resolutions):
            stride = finest // res
            grid = base[::stride]
            sub = exponent_scan(grid, budget=args.budget)
            scans.append((res, sub.positive_mask))
        depth = max(1, math.ceil(math.log2(max(args.frag_resolutions))))
        contrast = []
        for name in sorted(shipped_machines()):
            desc = enumerate_paths(load_machine(name), max_depth=depth)
            contrast.append(MachineContrast(name, len(desc.pieces), depth))
        report = fragmentation_report(scans, contrast)
        _atomic_write(Path(args.frag_out), report.render())
    return 0


def cmd_bss(args) -> int:
    path = Path(args.program)
    prog = parse_program(path.read_text())
    if args.action == "run":
        if args.input is None:
            raise ValueError("bss run needs --input")
        result = run(prog, args.input, args.fuel)
        if result is OUT_OF_FUEL:
            print(f"OUT_OF_FUEL after {args.fuel} steps")
        else:
            outs = " ".join(_FLOAT(v) for v in result.outputs)
            print(f"HALTED steps={result.steps} outputs={outs}")
        return 0
    desc = enumerate_paths(prog, max_depth=args.depth)
    if args.action == "paths":
        sys.stdout.write(serialize_description(desc))
        if len(prog.input_variables) == 1:
            print(f"components: {components_1d(desc)}")
        return 0
    if args.action == "components":
        print(components_1d(desc))
        return 0
    raise ValueError(f"unknown bss action {args.action!r}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chaoscope")
    ap.add_argument("--threads", type=int, default=None, help="worker threads for scans")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lyapunov", help="derivative-growth exponents")
    p.add_argument("--family", choices=["quadratic", "henon"], default="quadratic")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--n", type=int, default=10**6)
    p.add_argument("--generic-starts", type=int, default=0,
                   help="sample this many seeded starts instead of the critical orbit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("entropy", help="topological entropy estimates")
    p.add_argument("--a", type=float)
    p.add_argument("--n-max", type=int, default=22)
    p.add_argument("--pl-file", default=None, help="piecewise-linear map file (lo hi slope intercept)")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("cycles", help="attracting-cycle detection")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--max-period", type=int, default=24)
    p.add_argument("--budget", type=int, default=30000)
    p.set_defaults(func=cmd_cycles)

    p = sub.add_parser("cascade", help="period-doubling cascade")
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("srb", help="invariant-density evidence")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--iterations", type=int, default=10**6)
    p.add_argument("--burn-in", type=int, default=10**4)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_srb)

    p = sub.add_parser("decide", help="positive-entropy decision")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--margin", type=float, default=1e-4)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("scan", help="parameter sweep with CSV output")
    p.add_argument("--family", choices=["quadratic", "henon"], default="quadratic")
    p.add_argument("--interval", type=float, nargs=2, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--budget", type=int, default=4096)
    p.add_argument("--cycles-budget", type=int, default=20000)
    p.add_argument("--max-period", type=int, default=24)
    p.add_argument("--entropy-depth", type=int, default=14)
    p.add_argument("--seed", type=int, default=0, help="reserved for sampled starting points")
    p.add_argument("--out", required=True)
    p.add_argument("--raster", default=None, help="write a bifurcation raster (plain PPM)")
    p.add_argument("--frag-resolutions", type=int, nargs="+", default=None)
    p.add_argument("--frag-out", default="fragmentation.txt")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bss", help="machines over the reals")
    p.add_argument("action", choices=["run", "paths", "components"])
    p.add_argument("program")
    p.add_argument("--input", type=float, nargs="+", default=None)
    p.add_argument("--fuel", type=int, default=10**4)
    p.add_argument("--depth", type=int, default=32)
    p.set_defaults(func=cmd_bss)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _setup_threads(args.threads)
        return args.func(args)
    except (
        BssError,
        BracketError,
        DegreeOverflowError,
        EscapedOrbitError,
        LapBudgetError,
        NotMarkovError,
        UnresolvedRootError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
