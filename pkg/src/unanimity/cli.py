"""Command-line interface: simulate | capprob | phi | fit | verify.

Conventions shared by every subcommand:

- data goes to files (or stdout for JSON reports); progress goes to stderr;
- exit 0 on success, 1 on verification failure, 2 on usage errors;
- --seed 0 means "derive the seed from a hash of the full config"; the
  derived value is recorded in the JSON sidecar, so reruns of the same
  command are byte-identical;
- UNANIMITY_WORKERS overrides the default worker count.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, capprob, dynamics, reports, verify
from .geometry import domain_from_name

USAGE_ERROR = 2


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return max(1, args.workers)
    env = os.environ.get("UNANIMITY_WORKERS")
    return max(1, int(env)) if env else 1


def _resolve_seed(seed: int, config: dict) -> int:
    """Literal seed, or a config-hash-derived one when the seed is 0."""
    if seed != 0:
        return seed
    blob = json.dumps(config, sort_keys=True).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _write_output(path: str, text: str, sidecar: str | None = None) -> None:
    """Write atomically enough that failures never leave partial files."""
    out = Path(path)
    tmp = out.with_name(out.name + ".tmp")
    try:
        tmp.write_text(text)
        tmp.replace(out)
        if sidecar is not None:
            side = out.with_name(out.name + ".json")
            side_tmp = out.with_name(out.name + ".json.tmp")
            side_tmp.write_text(sidecar)
            side_tmp.replace(side)
    except BaseException:
        tmp.unlink(missing_ok=True)
        out.unlink(missing_ok=True)
        raise


def _positive(args_ns, names) -> None:
    for name in names:
        if getattr(args_ns, name) < 1:
            raise SystemExit(_usage(f"--{name.replace('_', '-')} must be positive"))


def _usage(msg: str) -> int:
    _log(f"error: {msg}")
    return USAGE_ERROR


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    _positive(args, ["rounds", "trials", "k"])
    domain = domain_from_name(args.domain)
    config = {
        "command": "simulate",
        "domain": args.domain,
        "rounds": args.rounds,
        "trials": args.trials,
        "k": args.k,
        "seed": args.seed,
    }
    seed = _resolve_seed(args.seed, config)
    config["derived_seed"] = seed
    _log(f"simulate: {args.domain} T={args.rounds} trials={args.trials} seed={seed}")
    stats = dynamics.run_ensemble(
        domain, args.rounds, args.trials, k=args.k, master_seed=seed,
        workers=_workers(args),
    )
    _write_output(
        args.out, reports.ensemble_csv(stats), reports.ensemble_sidecar(stats, config)
    )
    _log(f"wrote {args.out} (final mean size {stats.mean_size[-1]:.3f})")
    return 0


# ---------------------------------------------------------------------------
# capprob
# ---------------------------------------------------------------------------


def _parse_grid(domain: str, text: str):
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise SystemExit(_usage("empty grid"))
    if domain == "square":
        out = []
        for item in items:
            try:
                a, b = item.split(":")
                out.append((float(a), float(b)))
            except ValueError:
                raise SystemExit(_usage(f"square grid entries are a:b pairs, got {item!r}"))
        return out
    try:
        return [float(s) for s in items]
    except ValueError:
        raise SystemExit(_usage(f"bad grid {text!r}"))


def _cap_for(domain_name: str, param):
    if domain_name == "disk":
        return capprob.disk_segment_cap(param)
    if domain_name == "square":
        return capprob.square_triangle_cap(*param)
    from .geometry import INTERVAL, HalfPlane, make_cap

    return make_cap(INTERVAL, HalfPlane((1.0, 0.0), param))


def cmd_capprob(args) -> int:
    _positive(args, ["event_samples", "outer", "inner"])
    grid = _parse_grid(args.domain, args.grid)
    if args.suite == "lemma41":
        if args.domain != "disk":
            raise SystemExit(_usage("--suite lemma41 requires --domain disk"))
        for d in grid:
            if not (0.0 < d <= 0.125):
                raise SystemExit(_usage(f"lemma41 requires deltas in (0, 1/8], got {d}"))
    if args.suite == "lemma43" and args.domain != "square":
        raise SystemExit(_usage("--suite lemma43 requires --domain square"))
    config = {
        "command": "capprob",
        "domain": args.domain,
        "grid": args.grid,
        "suite": args.suite,
        "event_samples": args.event_samples,
        "outer": args.outer,
        "inner": args.inner,
        "seed": args.seed,
    }
    seed = _resolve_seed(args.seed, config)
    config["derived_seed"] = seed
    rows = []
    for i, param in enumerate(grid):
        label = f"{param[0]:g}:{param[1]:g}" if args.domain == "square" else f"{param:g}"
        try:
            cap = _cap_for(args.domain, param)
        except ValueError as exc:
            raise SystemExit(_usage(f"bad cap parameter {label}: {exc}"))
        ev = capprob.acceptance_prob_event(cap, args.event_samples, seed=seed + 2 * i)
        it = capprob.acceptance_prob_integral(
            cap, args.outer, args.inner, seed=seed + 2 * i + 1
        )
        rows.append((label, "event", ev.value, ev.stderr, ev.samples))
        rows.append((label, "integral", it.value, it.stderr, it.samples))
        if args.suite == "lemma41":
            bound = param**4
            rows.append((label, "ratio_delta4", ev.value / bound, ev.stderr / bound, ev.samples))
        elif args.suite == "lemma43":
            a, b = param
            bound = a**4 * (1.0 + np.log(b / a)) / 2.0**11
            rows.append((label, "ratio_bound", ev.value / bound, ev.stderr / bound, ev.samples))
        _log(f"cap {label}: event={ev.value:.6g} integral={it.value:.6g}")
    _write_output(
        args.out,
        reports.estimates_csv(rows),
        json.dumps({"config": config}, indent=2, sort_keys=True) + "\n",
    )
    _log(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# phi
# ---------------------------------------------------------------------------


def cmd_phi(args) -> int:
    _positive(args, ["pairs"])
    if args.domain not in ("disk", "square"):
        raise SystemExit(_usage("phi is defined for --domain disk or square"))
    domain = domain_from_name(args.domain)
    items = [s for s in args.lambdas.split(",") if s.strip()]
    if not items:
        raise SystemExit(_usage("empty lambda grid"))
    try:
        lambdas = [float(s) for s in items]
    except ValueError:
        raise SystemExit(_usage(f"bad lambda grid {args.lambdas!r}"))
    if any(l < 0 for l in lambdas):
        raise SystemExit(_usage("lambdas must be nonnegative"))
    lambdas = sorted(lambdas)
    config = {
        "command": "phi",
        "domain": args.domain,
        "lambdas": lambdas,
        "pairs": args.pairs,
        "seed": args.seed,
    }
    seed = _resolve_seed(args.seed, config)
    config["derived_seed"] = seed
    ests = capprob.phi_grid(domain, lambdas, args.pairs, seed=seed)
    rows = [
        (lam, e.value, e.stderr, e.samples) for lam, e in zip(lambdas, ests)
    ]
    _write_output(
        args.out,
        reports.csv_lines(("lambda", "value", "stderr", "samples"), rows),
        json.dumps({"config": config}, indent=2, sort_keys=True) + "\n",
    )
    _log(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# fit
# ---------------------------------------------------------------------------


def _read_ensemble_csv(path: str):
    data = np.genfromtxt(path, delimiter=",", names=True)
    needed = {"round", "mean_size", "acceptance_rate"}
    if not needed.issubset(set(data.dtype.names or ())):
        raise SystemExit(_usage(f"{path} is not a simulate output file"))
    return data


def cmd_fit(args) -> int:
    data = _read_ensemble_csv(args.input)
    t = data["round"]
    y = data["mean_size"]
    extra = {"input": args.input, "t_min": args.t_min}
    if args.model == "compare":
        ranked = analysis.model_compare(
            t[1:], y[1:], ["log", "power", "logloglog"], t_min=args.t_min
        )
        doc = {
            "ranking": [
                json.loads(reports.fit_json(r)) for r in ranked
            ],
            "best": ranked[0].model.value,
        }
        doc.update(extra)
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif args.model == "decay":
        trials = args.trials
        if trials is None:
            side = Path(args.input + ".json")
            if side.exists():
                trials = json.loads(side.read_text()).get("trials")
        if not trials:
            raise SystemExit(_usage("decay fit needs --trials (or a sidecar file)"))
        rate = data["acceptance_rate"][1:]
        centres, rates = analysis.binned_acceptance(rate, int(trials), t_min=args.t_min)
        result = analysis.fit_decay(centres, rates, t_min=args.t_min)
        text = reports.fit_json(result, extra)
    else:
        fitter = {
            "power": lambda: analysis.fit_power(t, y, t_min=args.t_min, offset=args.offset),
            "log": lambda: analysis.fit_log(t, y, t_min=args.t_min),
            "logloglog": lambda: analysis.fit_logloglog(t, y, t_min=args.t_min),
        }[args.model]
        text = reports.fit_json(fitter(), extra)
    if args.out:
        _write_output(args.out, text)
        _log(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    verify.set_workers(_workers(args))
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in verify.SUITES:
            raise SystemExit(
                _usage(f"unknown suite {n!r}; choose from {sorted(verify.SUITES)} or 'all'")
            )
    results = []
    for name in names:
        _log(f"running suite {name} ...")
        res = verify.run_suite(name, seed=args.seed)
        for c in res.checks:
            _log("  " + c.line())
        _log(f"suite {name}: {'PASS' if res.passed else 'FAIL'} ({res.seconds:.1f}s)")
        results.append(res)
    doc = {
        "passed": all(r.passed for r in results),
        "suites": [
            {
                "suite": r.suite,
                "passed": r.passed,
                "seconds": round(r.seconds, 3),
                "checks": [
                    {
                        "name": c.name,
                        "passed": c.passed,
                        "observed": c.observed,
                        "threshold": c.threshold,
                        "comparison": c.comparison,
                        "detail": c.detail,
                    }
                    for c in r.checks
                ],
            }
            for r in results
        ],
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        _write_output(args.out, text)
        _log(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0 if doc["passed"] else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="unanimity",
        description="Consensus-admission dynamics: simulation and numerical checks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a trial ensemble and write a CSV")
    sim.add_argument("--domain", required=True, choices=["interval", "square", "disk"])
    sim.add_argument("--rounds", type=int, required=True)
    sim.add_argument("--trials", type=int, required=True)
    sim.add_argument("--k", type=int, default=1, help="initial group size")
    sim.add_argument("--seed", type=int, default=0, help="0 derives from config hash")
    sim.add_argument("--workers", type=int, default=0)
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=cmd_simulate)

    cpp = sub.add_parser("capprob", help="cap acceptance-probability estimators")
    cpp.add_argument("--domain", required=True, choices=["interval", "square", "disk"])
    cpp.add_argument(
        "--grid",
        required=True,
        help="comma list: segment heights (disk), a:b legs (square), lengths (interval)",
    )
    cpp.add_argument("--suite", choices=["lemma41", "lemma43"], default=None)
    cpp.add_argument("--event-samples", type=int, default=400_000, dest="event_samples")
    cpp.add_argument("--outer", type=int, default=1000)
    cpp.add_argument("--inner", type=int, default=1000)
    cpp.add_argument("--seed", type=int, default=0)
    cpp.add_argument("--out", required=True)
    cpp.set_defaults(func=cmd_capprob)

    phi = sub.add_parser("phi", help="distribution of the bound function f_K")
    phi.add_argument("--domain", required=True, choices=["square", "disk"])
    phi.add_argument("--lambdas", required=True, help="comma list of thresholds")
    phi.add_argument("--pairs", type=int, default=10_000_000)
    phi.add_argument("--seed", type=int, default=0)
    phi.add_argument("--out", required=True)
    phi.set_defaults(func=cmd_phi)

    fit = sub.add_parser("fit", help="fit growth laws to a simulate CSV")
    fit.add_argument(
        "--model", required=True, choices=["power", "log", "logloglog", "decay", "compare"]
    )
    fit.add_argument("--input", required=True)
    fit.add_argument("--t-min", type=float, default=100.0, dest="t_min")
    fit.add_argument("--offset", action="store_true", help="power fit with offset term")
    fit.add_argument("--trials", type=int, default=None, help="for decay binning")
    fit.add_argument("--out", default=None)
    fit.set_defaults(func=cmd_fit)

    ver = sub.add_parser("verify", help="run acceptance verification suites")
    ver.add_argument("--suite", default="all")
    ver.add_argument("--seed", type=int, default=None, help="override frozen suite seed")
    ver.add_argument("--workers", type=int, default=0)
    ver.add_argument("--out", default=None)
    ver.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else USAGE_ERROR
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
