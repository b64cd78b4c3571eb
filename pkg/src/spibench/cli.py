"""Command-line front end: sweeps, CSV emission and figure rendering.

Subcommands
-----------
pns-sweep     photon-number-superposition fidelity vs noise width
cz-sweep      averaged photon-photon gate fidelity vs input bandwidth
lr-sweep      averaged cluster-chain fidelity vs trion precession
merkulov      frozen-field spin polarization: closed form vs quadrature/MC
oracle-check  collision-simulator vs closed-form convergence ladder

Output is CSV with '#'-prefixed metadata header lines and 17-significant
digit floats; re-running with identical configuration and seed yields a
byte-identical body (the timestamp line is excluded from the hashed
region).  ``--plot PATH`` renders a matplotlib figure alongside the CSV.
Exit codes: 0 success, 1 threshold/row failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .amplitudes import ExponentialWavepacket
from .averaging import (
    GaussHermiteSpec,
    MonteCarloSpec,
    gaussian_average,
    merkulov_sz,
    sz_single_sample,
)
from .oracle import (
    convergence_study,
    emission_discrepancy,
    lr_discrepancy,
    scattering_discrepancy,
)
from .params import OverhauserDistribution, PhysicalConfig, sample_magnetic
from .protocols import cz_fidelity_averaged, lr_fidelity_averaged, pns_fidelity_averaged

FLOAT_FMT = "%.17g"

ORACLE_ORDER_MIN = 0.9
ORACLE_DISCREPANCY_MAX = 5e-3
DEFAULT_LADDER = "4e-3,2e-3,1e-3,5e-4"


class UsageError(Exception):
    pass


def parse_grid(text, lo=None, hi=None, name="grid"):
    """Parse 'a,b,c' (explicit values) or 'min:max:num' (log-spaced)."""
    try:
        if ":" in text:
            lo_s, hi_s, num_s = text.split(":")
            values = np.geomspace(float(lo_s), float(hi_s), int(num_s))
        else:
            values = np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse {name} {text!r}: {exc}") from None
    if values.size == 0:
        raise UsageError(f"{name} is empty")
    if lo is not None and (np.any(values < lo) or np.any(values > hi)):
        raise UsageError(f"{name} values must lie within [{lo}, {hi}]")
    return np.sort(values)


def parse_avg(text, seed):
    kind, _, num = text.partition(":")
    try:
        if kind == "gh":
            return GaussHermiteSpec(int(num or 15))
        if kind == "mc":
            if seed is None:
                raise UsageError("--seed is required for Monte Carlo averaging")
            return MonteCarloSpec(int(num), seed)
    except ValueError as exc:
        raise UsageError(f"bad averaging spec {text!r}: {exc}") from None
    raise UsageError(f"averaging spec must be 'gh:<nodes>' or 'mc:<n>', got {text!r}")


def load_config(path):
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {raw.rstrip()}")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def apply_config(args, parser_defaults):
    """Config-file values fill in flags the user did not set explicitly."""
    if not getattr(args, "config", None):
        return
    file_values = load_config(args.config)
    for key, val in file_values.items():
        if not hasattr(args, key):
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) == parser_defaults.get(key):
            current = parser_defaults.get(key)
            caster = type(current) if current is not None else str
            if caster is bool:
                val = val.lower() in ("1", "true", "yes")
            elif current is not None:
                val = caster(val)
            setattr(args, key, val)


def config_hash(command, params, seed):
    payload = [command] + [f"{k}={params[k]}" for k in sorted(params)] + [f"seed={seed}"]
    return hashlib.sha256("\n".join(payload).encode()).hexdigest()[:16]


def write_csv(out, command, params, seed, columns, rows):
    lines = [f"# spibench {command}"]
    for key in sorted(params):
        lines.append(f"# {key}={params[key]}")
    lines.append(f"# seed={seed}")
    lines.append(f"# config_hash={config_hash(command, params, seed)}")
    lines.append(f"# timestamp={time.strftime('%Y-%m-%dT%H:%M:%S%z')}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(
            cell if isinstance(cell, str) else FLOAT_FMT % cell for cell in row
        ))
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _worker_count():
    try:
        return max(1, int(os.environ.get("SPIBENCH_WORKERS", "1")))
    except ValueError:
        return 1


def _map_points(fn, items):
    """Map over sweep points, optionally on a process pool; results are
    assembled in parameter order regardless of completion order."""
    workers = _worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Sweep point evaluators (module level so a process pool can pickle them)


def _eval_cz_point(item):
    big_gamma, omega_e, w, avg = item
    cfg = PhysicalConfig(omega_e=omega_e, omega_g_bar=omega_e, w=w, big_gamma=big_gamma)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return cz_fidelity_averaged(cfg, avg)


def _eval_lr_point(item):
    omega_e, k, w, n_steps, avg = item
    cfg = PhysicalConfig(omega_e=omega_e, k_ratio=k, w=w)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return lr_fidelity_averaged(cfg, n_steps, avg)


# ---------------------------------------------------------------------------
# Commands


def cmd_pns_sweep(args):
    grid = parse_grid(args.w_grid, 1e-3, 1e3, "--w-grid")
    rows = [(w, pns_fidelity_averaged(w), 0.0) for w in grid]
    params = {"w_grid": args.w_grid}
    write_csv(args.out, "pns-sweep", params, args.seed,
              ["w_over_gamma", "fidelity", "error_estimate"], rows)
    if args.plot:
        from .plotting import render_sweep

        render_sweep(grid, [r[1] for r in rows], None, args.plot,
                     r"$w/\gamma$", "averaged fidelity",
                     "photon-number superposition")
    return 0


def cmd_cz_sweep(args):
    grid = parse_grid(args.big_gamma, 1e-4, 1e2, "--big-gamma")
    avg = parse_avg(args.avg, args.seed)
    items = [(g, args.omega_e, args.w, avg) for g in grid]
    rows, failed = [], 0
    for g, result in zip(grid, _map_points(_eval_cz_point_safe, items)):
        if result is None:
            rows.append((g, "nan", "nan"))
            failed += 1
        else:
            rows.append((g, result[0], result[1]))
    params = {"big_gamma": args.big_gamma, "omega_e": args.omega_e,
              "omega_g_bar": args.omega_e, "w": args.w, "avg": args.avg}
    write_csv(args.out, "cz-sweep", params, args.seed,
              ["big_gamma_over_gamma", "fidelity", "error_estimate"], rows)
    if args.plot:
        from .plotting import render_sweep

        good = [r for r in rows if not isinstance(r[1], str)]
        render_sweep([r[0] for r in good], [r[1] for r in good],
                     [r[2] for r in good], args.plot,
                     r"$\Gamma/\gamma$", "averaged fidelity",
                     f"CZ gate, $\\Omega_e/\\gamma$={args.omega_e}, w={args.w}")
    return 1 if failed else 0


def _eval_cz_point_safe(item):
    try:
        return _eval_cz_point(item)
    except Exception:
        return None


def _eval_lr_point_safe(item):
    try:
        return _eval_lr_point(item)
    except Exception:
        return None


def cmd_lr_sweep(args):
    if args.n_steps not in (1, 2):
        raise UsageError("--n-steps must be 1 or 2")
    grid = parse_grid(args.omega_e, 1e-4, 10.0, "--omega-e")
    avg = parse_avg(args.avg, args.seed)
    items = [(om, args.k, args.w, args.n_steps, avg) for om in grid]
    rows, failed = [], 0
    for om, result in zip(grid, _map_points(_eval_lr_point_safe, items)):
        if result is None:
            rows.append((om, "nan", "nan"))
            failed += 1
        else:
            rows.append((om, result[0], result[1]))
    params = {"omega_e": args.omega_e, "k": args.k, "w": args.w,
              "n_steps": args.n_steps, "avg": args.avg}
    write_csv(args.out, "lr-sweep", params, args.seed,
              ["omega_e_over_gamma", "fidelity", "error_estimate"], rows)
    if args.plot:
        from .plotting import render_sweep

        good = [r for r in rows if not isinstance(r[1], str)]
        render_sweep([r[0] for r in good], [r[1] for r in good],
                     [r[2] for r in good], args.plot,
                     r"$\Omega_e/\gamma$", "averaged fidelity",
                     f"cluster chain, n={args.n_steps}, k={args.k}, w={args.w}")
    return 1 if failed else 0


def cmd_merkulov(args):
    grid = parse_grid(args.t_grid, 0.0, 1e6, "--t-grid")
    dist = OverhauserDistribution(args.w)
    gh = GaussHermiteSpec(args.gh_nodes)
    mc = MonteCarloSpec(args.mc_samples, args.seed) if args.seed is not None else None
    rows = []
    for t in grid:
        closed = merkulov_sz(t, args.w)
        quad, _ = gaussian_average(lambda s: sz_single_sample(t, s), dist, gh)
        if mc is not None:
            mc_val, _ = gaussian_average(lambda s: sz_single_sample(t, s), dist, mc)
        else:
            mc_val = float("nan")
        rows.append((t, closed, quad, mc_val))
    params = {"t_grid": args.t_grid, "w": args.w, "gh_nodes": args.gh_nodes,
              "mc_samples": args.mc_samples}
    write_csv(args.out, "merkulov", params, args.seed,
              ["t", "closed_form", "quadrature", "monte_carlo"], rows)
    if args.plot:
        from .plotting import render_merkulov

        render_merkulov(grid, [r[1] for r in rows], [r[2] for r in rows],
                        None if mc is None else [r[3] for r in rows], args.plot)
    return 0


def _oracle_scenario(name, seed):
    """Seeded noisy sample plus a discrepancy runner for one scenario."""
    if name == "emission":
        dist = OverhauserDistribution(0.1, (0.3, 0.0, 0.0))
        sample = sample_magnetic(dist, rng_seed=seed, omega_e=0.2)
        return sample, lambda dt: emission_discrepancy(sample, 8.0, dt)
    if name == "scattering":
        dist = OverhauserDistribution(0.1, (0.3, 0.0, 0.0))
        sample = sample_magnetic(dist, rng_seed=seed, omega_e=0.2)
        wp = ExponentialWavepacket(0.6)
        return sample, lambda dt: scattering_discrepancy(sample, wp, 25.0, dt)
    if name in ("lr1", "lr2"):
        dist = OverhauserDistribution(0.1, (0.4, 0.0, 0.0))
        sample = sample_magnetic(dist, rng_seed=seed, omega_e=0.2)
        t_step = math.pi / (2 * 0.4)
        n = 1 if name == "lr1" else 2
        return sample, lambda dt: lr_discrepancy(sample, n, dt, t_step)
    raise UsageError(f"unknown scenario {name!r}")


def cmd_oracle_check(args):
    if args.seed is None:
        raise UsageError("--seed is required for oracle-check")
    ladder = parse_grid(args.delta_t, 1e-6, 1e-2, "--delta-t")
    sample, runner = _oracle_scenario(args.scenario, args.seed)
    report = convergence_study(runner, list(ladder))
    rows = [(dt, err) for dt, err in zip(report.delta_ts, report.errors)]
    params = {"scenario": args.scenario, "delta_t": args.delta_t,
              "sample_omega_g": FLOAT_FMT % sample.omega_g,
              "sample_n": ",".join(FLOAT_FMT % c for c in sample.n),
              "sample_omega_e": FLOAT_FMT % sample.omega_e}
    write_csv(args.out, "oracle-check", params, args.seed,
              ["delta_t", "max_discrepancy"], rows)
    order_txt = "undefined" if report.order is None else f"{report.order:.3f}"
    final = report.errors[-1]
    ok = (report.order is not None and report.order >= ORACLE_ORDER_MIN
          and final < ORACLE_DISCREPANCY_MAX)
    print(f"# scenario={args.scenario} order={order_txt} "
          f"final_discrepancy={final:.3e} "
          f"thresholds: order>={ORACLE_ORDER_MIN}, discrepancy<{ORACLE_DISCREPANCY_MAX}"
          f" -> {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    if args.plot:
        from .plotting import render_convergence

        render_convergence(report.delta_ts, report.errors, report.order,
                           args.plot, f"oracle check: {args.scenario}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--config", help="key=value config file; flags override it")
    sub.add_argument("--seed", type=int, default=None, help="RNG seed (required for MC modes)")
    sub.add_argument("--out", default=None, help="output CSV path (default stdout)")
    sub.add_argument("--plot", default=None, help="render a figure to this path")


def _defaults_of(subparser):
    return {a.dest: a.default for a in subparser._actions}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spibench",
        description="Spin-photon interface protocol fidelity benchmarks "
                    "(all rates in units of the emission rate gamma).",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("pns-sweep", help="photon-number superposition vs noise width")
    p.add_argument("--w-grid", default="1e-2:1e1:25",
                   help="w/gamma values: 'a,b,c' or 'min:max:num' (log)")
    _add_common(p)
    p.set_defaults(func=cmd_pns_sweep, _defaults=_defaults_of(p))

    p = subs.add_parser("cz-sweep", help="CZ gate fidelity vs input bandwidth")
    p.add_argument("--big-gamma", default="5e-3:1:25", help="Gamma/gamma grid")
    p.add_argument("--omega-e", type=float, default=1e-3,
                   help="trion precession; the nominal spin precession is set equal")
    p.add_argument("--w", type=float, default=0.0, help="Overhauser width")
    p.add_argument("--avg", default="gh:15", help="'gh:<nodes>' or 'mc:<n>'")
    _add_common(p)
    p.set_defaults(func=cmd_cz_sweep, _defaults=_defaults_of(p))

    p = subs.add_parser("lr-sweep", help="cluster-chain fidelity vs trion precession")
    p.add_argument("--omega-e", default="5e-2:5e-1:15", help="Omega_e/gamma grid")
    p.add_argument("--k", type=float, default=2.0, help="Lande ratio omega_g_bar/omega_e")
    p.add_argument("--w", type=float, default=0.1, help="Overhauser width")
    p.add_argument("--n-steps", type=int, default=1, choices=(1, 2))
    p.add_argument("--avg", default="gh:15")
    _add_common(p)
    p.set_defaults(func=cmd_lr_sweep, _defaults=_defaults_of(p))

    p = subs.add_parser("merkulov", help="frozen-field polarization reference")
    p.add_argument("--t-grid", default="0,0.5,1,2,3,4,6,8,10,15,20,30,40,60,80,100,150,200,300,400")
    p.add_argument("--w", type=float, default=0.1)
    p.add_argument("--gh-nodes", type=int, default=21)
    p.add_argument("--mc-samples", type=int, default=20000)
    _add_common(p)
    p.set_defaults(func=cmd_merkulov, _defaults=_defaults_of(p))

    p = subs.add_parser("oracle-check", help="collision simulator vs closed forms")
    p.add_argument("--scenario", required=True,
                   choices=("emission", "scattering", "lr1", "lr2"))
    p.add_argument("--delta-t", default=DEFAULT_LADDER, help="step-size ladder")
    _add_common(p)
    p.set_defaults(func=cmd_oracle_check, _defaults=_defaults_of(p))
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        apply_config(args, args._defaults)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
