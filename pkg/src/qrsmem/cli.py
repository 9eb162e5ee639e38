"""Command-line surface binding all modules for reproducible runs.

Subcommands: ``binarize`` (stabiliser listings and golden diffing),
``fractions`` (one collision-fraction table), ``fractions-cache`` (tables
for a grid, parallelisable), ``frontier`` (full sweep with Pareto frontier
and optional baseline crossover), and ``faultsweep`` (exhaustive fault
injection on the cat-preparation script).

Every run can emit a manifest holding the command line, config hashes,
seeds and output hashes, sufficient to replay it byte-identically.  All
randomness derives from the single --seed via named streams.  Exit codes:
0 ok, 1 property violation, 2 config/parse error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .basis import BasisError, load_basis_file, standard_self_dual_basis
from .decode import derive_seed, estimate_fraction_table, load_fraction_dir
from .gf import FieldError, field
from .grs import CodeError, GrsCode, TooLarge, generator_matrix, read_alpha, standard_alpha
from .noise import ConfigError, PostSelection, default_rates, read_noise_config
from .qrs import build_qrs, binarize, format_binarized, uniform_self_dual_mapping
from .frontier import (NoBaseline, SweepGrid, crossover, frontier_curve, pareto,
                       points_to_csv, read_baseline_csv, sweep)
from .tableau import CatPrepScript, min_x_weight

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="ascii")
    os.replace(tmp, path)


class _Manifest:
    def __init__(self, args):
        self.data = {
            "command": " ".join(sys.argv),
            "subcommand": args.command,
            "version": __version__,
            "kernel_backend": kernels.BACKEND,
            "seed": getattr(args, "seed", None),
            "configs": {},
            "outputs": {},
            "results": {},
        }
        self.t0 = time.monotonic()

    def config(self, path: Path):
        self.data["configs"][str(path)] = _sha256(path)

    def output(self, path: Path):
        self.data["outputs"][str(path)] = _sha256(path)

    def write(self, path: Path):
        self.data["wall_time_s"] = round(time.monotonic() - self.t0, 3)
        _atomic_write(path, json.dumps(self.data, indent=2, sort_keys=True) + "\n")


def _load_code_spec(path: Path):
    """Keyed-text code spec: n, d, optional s/poly/v, and alpha as inline
    decimals, 'standard', or 'file:<path>'."""
    kv = {}
    for raw in path.read_text(encoding="ascii").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad code spec line: {raw!r}")
        key, val = (p.strip() for p in line.split("=", 1))
        kv[key] = val
    try:
        n = int(kv.pop("n"))
        d = int(kv.pop("d"))
    except (KeyError, ValueError) as exc:
        raise ConfigError("code spec needs integer n and d") from exc
    s = int(kv.pop("s", "11"))
    poly = int(kv.pop("poly")) if "poly" in kv else None
    ctx = field(s, poly)
    alpha_spec = kv.pop("alpha", "standard")
    if alpha_spec == "standard":
        alpha = standard_alpha(n)
    elif alpha_spec.startswith("file:"):
        alpha = read_alpha(Path(alpha_spec[5:]).read_text(encoding="ascii"))
    else:
        alpha = tuple(int(tok) for tok in alpha_spec.split())
    v_spec = kv.pop("v", "")
    v = tuple(int(tok) for tok in v_spec.split()) if v_spec else (1,) * n
    if kv:
        raise ConfigError(f"unknown code spec keys: {sorted(kv)}")
    return build_qrs(n, d, alpha, v, ctx)


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_binarize(args) -> int:
    code = _load_code_spec(Path(args.code))
    if args.basis:
        basis = load_basis_file(args.basis)
    else:
        basis = standard_self_dual_basis()
    css = binarize(code, uniform_self_dual_mapping(code, basis))
    text = format_binarized(css)
    if args.out:
        _atomic_write(Path(args.out), text)
    if args.check:
        reference = Path(args.check).read_text(encoding="ascii")
        if reference != text:
            sys.stderr.write("binarize: output differs from reference\n")
            return EXIT_VIOLATION
        return EXIT_OK
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def _parity_for(n: int, d: int, ctx, alpha=None):
    alpha = alpha if alpha is not None else standard_alpha(n)
    return generator_matrix(GrsCode(n, d - 1, alpha, (1,) * n, ctx)), alpha


def cmd_fractions(args) -> int:
    ctx = field(11)
    h, alpha = _parity_for(args.n, args.d, ctx)
    seed = derive_seed(args.seed, "fractions", args.n, args.d, args.e)
    table = estimate_fraction_table(h, args.n, args.d, args.e, args.samples,
                                    seed, ctx, alpha=alpha)
    text = table.to_csv()
    if args.out:
        _atomic_write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cache_one(job):
    n, d, e, samples, root_seed = job
    ctx = field(11)
    h, alpha = _parity_for(n, d, ctx)
    seed = derive_seed(root_seed, "fractions", n, d, e)
    table = estimate_fraction_table(h, n, d, e, samples, seed, ctx, alpha=alpha)
    return n, d, e, table.to_csv()


def cmd_fractions_cache(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    jobs = []
    pairs = [(4, 2, args.samples_e2), (5, 3, args.samples_e3), (6, 3, args.samples_e3)]
    if args.with_e4:
        pairs.append((7, 4, args.samples_e4))
    for n in range(args.n_min, args.n_max + 1):
        for d, e, samples in pairs:
            if 2 * (d - 1) >= n:
                continue
            target = out / f"frac_n{n}_d{d}_e{e}.csv"
            if target.exists() and not args.force:
                continue
            jobs.append((n, d, e, samples, args.seed))
    if args.jobs > 1 and len(jobs) > 1:
        import multiprocessing as mp

        with mp.Pool(args.jobs) as pool:
            for n, d, e, text in pool.imap_unordered(_cache_one, jobs):
                _atomic_write(out / f"frac_n{n}_d{d}_e{e}.csv", text)
                print(f"cached n={n} d={d} e={e}")
    else:
        for job in jobs:
            n, d, e, text = _cache_one(job)
            _atomic_write(out / f"frac_n{n}_d{d}_e{e}.csv", text)
            print(f"cached n={n} d={d} e={e}")
    return EXIT_OK


def _parse_grid_config(path: Path | None) -> SweepGrid:
    if path is None:
        return SweepGrid()
    kv = {}
    for raw in path.read_text(encoding="ascii").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, val = (p.strip() for p in line.split("=", 1))
        kv[key] = val

    def parse_values(text: str) -> tuple[int, ...]:
        out = []
        for tok in text.replace(",", " ").split():
            if ":" in tok:
                lo, hi = tok.split(":")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(tok))
        return tuple(out)

    base = SweepGrid()
    return SweepGrid(
        n_values=parse_values(kv["n"]) if "n" in kv else base.n_values,
        m_values=parse_values(kv["m"]) if "m" in kv else base.m_values,
        d_values=parse_values(kv["d"]) if "d" in kv else base.d_values,
        big_m_values=parse_values(kv["M"]) if "M" in kv else base.big_m_values,
        rounds_values=parse_values(kv["R"]) if "R" in kv else base.rounds_values,
        max_physical=int(kv["max_physical"]) if "max_physical" in kv else base.max_physical,
    )


def cmd_frontier(args) -> int:
    manifest = _Manifest(args)
    if args.config:
        rates, ps = read_noise_config(Path(args.config).read_text(encoding="ascii"))
        manifest.config(Path(args.config))
    else:
        rates, ps = default_rates(), PostSelection.none()
    grid = _parse_grid_config(Path(args.grid) if args.grid else None)
    if args.grid:
        manifest.config(Path(args.grid))
    fractions = load_fraction_dir(args.fractions) if args.fractions else None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    skip_log: list = []
    points = sweep(rates, ps, grid, fractions=fractions, skip_log=skip_log)
    points_path = out / "sweep.csv"
    _atomic_write(points_path, points_to_csv(points, ps))
    manifest.output(points_path)
    front = pareto(points)
    front_path = out / "frontier.csv"
    _atomic_write(front_path, points_to_csv(front, ps))
    manifest.output(front_path)
    manifest.data["results"]["points"] = len(points)
    manifest.data["results"]["skipped"] = len(skip_log)
    manifest.data["results"]["frontier_points"] = len(front)
    if args.baseline:
        baseline = read_baseline_csv(Path(args.baseline).read_text(encoding="ascii"))
        manifest.config(Path(args.baseline))
        cross = crossover(frontier_curve(points), baseline)
        manifest.data["results"]["crossover_ler"] = cross
    manifest.write(out / "manifest.json")
    print(f"{len(points)} points, frontier {len(front)}, skipped {len(skip_log)}")
    return EXIT_OK


def cmd_faultsweep(args) -> int:
    ctx = field(args.s)
    rng_gammas = random.Random(derive_seed(args.seed, "gammas"))
    gammas = [rng_gammas.randrange(1, ctx.q) for _ in range(args.n)]
    script = CatPrepScript(gammas, args.rounds, ctx)
    events = script.enumerate_single_faults(range(1, ctx.q))
    violations = []
    accepted = 0
    beyond_contract = 0
    fault_sets: list[list] = [[e] for e in events]
    if args.max_faults >= 2:
        fault_sets += [[a, b] for i, a in enumerate(events) for b in events[i + 1:]]
    # The contract says s faults leave at most s errors, for s up to the
    # number of verification rounds; the single-fault check is kept for
    # rounds=0 as the negative control of the unverified preparation.
    contract_depth = max(args.rounds, 1)
    for fs in fault_sets:
        rng = random.Random(derive_seed(args.seed, "run", *[str(f) for f in fs]))
        result = script.run(faults=fs, rng=rng)
        if result.accepted:
            accepted += 1
            weight = min_x_weight(result.residual.x, gammas, ctx)
            if weight > len(fs):
                if len(fs) <= contract_depth:
                    violations.append((fs, weight, result))
                else:
                    beyond_contract += 1
    report = {
        "protocol": "cat_prep",
        "n": args.n, "rounds": args.rounds, "q": ctx.q,
        "fault_sets": len(fault_sets), "accepted": accepted,
        "violations": len(violations),
        "beyond_contract_weight_events": beyond_contract,
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        _atomic_write(Path(args.out), text)
    sys.stdout.write(text)
    if violations:
        fs, weight, result = violations[0]
        sys.stderr.write(f"counterexample (residual X weight {weight}):\n")
        sys.stderr.write(result.to_json_lines())
        return EXIT_VIOLATION
    return EXIT_OK


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrsmem")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("binarize", help="emit or check binarised stabiliser listings")
    p.add_argument("--code", required=True, help="code spec file")
    p.add_argument("--basis", help="basis file (default: packaged self-dual basis)")
    p.add_argument("--out", help="write listing here instead of stdout")
    p.add_argument("--check", help="compare against a reference listing")
    p.set_defaults(func=cmd_binarize)

    p = sub.add_parser("fractions", help="estimate one collision-fraction table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fractions)

    p = sub.add_parser("fractions-cache", help="estimate tables over the sweep grid")
    p.add_argument("--out", required=True, help="cache directory")
    p.add_argument("--n-min", type=int, default=20)
    p.add_argument("--n-max", type=int, default=80)
    p.add_argument("--samples-e2", type=int, default=50_000)
    p.add_argument("--samples-e3", type=int, default=10_000)
    p.add_argument("--samples-e4", type=int, default=2_000)
    p.add_argument("--with-e4", action="store_true",
                   help="also sample the weight-4 tables (slow)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_fractions_cache)

    p = sub.add_parser("frontier", help="run the parameter sweep")
    p.add_argument("--config", help="noise config file (default: reference rates)")
    p.add_argument("--grid", help="grid config file (default: full sweep grid)")
    p.add_argument("--fractions", help="fraction-table cache directory")
    p.add_argument("--baseline", help="baseline (ler, overhead) CSV for crossover")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("faultsweep", help="exhaustive fault injection on cat prep")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--s", type=int, default=3, help="field degree (q = 2^s)")
    p.add_argument("--max-faults", type=int, default=1, choices=(1, 2))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_faultsweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        sys.stderr.write(f"resource guard: {exc}\n")
        return EXIT_RESOURCE
    except (ConfigError, CodeError, BasisError, FieldError, NoBaseline,
            FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
