"""Command-line entry point: ``varsel fit | cv | sim | data | rerun``.

Every command that writes results also writes a ``manifest.json`` holding
the exact argument list, resolved configuration and input digests, which
``varsel rerun`` replays.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import cp_estimated, largest_model_sigma2, sp
from .crossval import METHODS, VARIANCE_SOURCES, CvConfig, default_max_steps, reversed_cv
from .data_model import (
    augment_spurious,
    expand_quadratic,
    load_diabetes,
    read_csv,
    standardize,
    write_csv,
)
from .errors import ColumnError, ConfigError, VarselError, ZeroVarianceError
from .lars import lars_path, step_cap, truncate_path
from .ortho_sim import SimConfig, simulate_orthogonal
from .stepwise import forward_stepwise_ric

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_COLUMN = 4
EXIT_ZERO_VARIANCE = 5
EXIT_CONFIG = 6
EXIT_DATA = 7

FLAGS_SUFFIX = ".flags.json"


class UsageError(VarselError):
    """Required command-line information is missing."""


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# data loading shared by fit and cv


def _flags_for(path: Path, flags_file):
    """Response and binary column names from a flag file, if one applies."""
    candidate = Path(flags_file) if flags_file else Path(str(path) + FLAGS_SUFFIX)
    if flags_file is None and not candidate.exists():
        return {}
    with open(candidate, encoding="utf-8") as fh:
        return json.load(fh)


def load_input(args):
    """Read, augment and expand the dataset named by the data options.

    Returns the dataset, the resolved data options, and input digests.
    """
    path = Path(args.data)
    flags = _flags_for(path, args.flags)
    response = args.response or flags.get("response")
    if not response:
        raise UsageError("no response column: pass --response or a flag file")
    binary = _csv_list(args.binary) if args.binary is not None else list(flags.get("binary", []))
    d = read_csv(path, response, binary)
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 0x5EED]))
    d = augment_spurious(d, args.spurious, rng)
    if args.expand == "quadratic":
        d = expand_quadratic(d)
    resolved = {
        "data": str(path.resolve()),
        "response": response,
        "binary": binary,
        "spurious": args.spurious,
        "expand": args.expand,
    }
    inputs = {str(path.resolve()): sha256_file(path)}
    return d, resolved, inputs


def _data_argv(resolved) -> list[str]:
    argv = ["--data", resolved["data"], "--response", resolved["response"],
            "--binary", ",".join(resolved["binary"]),
            "--spurious", str(resolved["spurious"]), "--expand", resolved["expand"]]
    return argv


def manifest(command, argv, config, seed, inputs, outputs) -> dict:
    return {
        "command": command,
        "argv": argv,
        "config": config,
        "seed": seed,
        "inputs": inputs,
        "outputs": outputs,
        "tool": "varsel",
        "version": __version__,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_fit(args) -> int:
    d, resolved, inputs = load_input(args)
    sd = standardize(d)
    max_steps = args.max_steps if args.max_steps is not None else default_max_steps(d.m)
    full_cap = step_cap(sd.n, sd.m, intercept=True)
    cap = min(max_steps, full_cap)

    step = forward_stepwise_ric(sd, d.m)
    path = lars_path(sd, full_cap if "largest_lars" in (args.cp_variance, args.sp_variance) else cap)
    variances = {"stepwise": step.sigma2_hat, "largest_lars": largest_model_sigma2(path.rss, sd.n)}
    path = truncate_path(path, cap)
    floor = 1e-12 * max(float(np.var(sd.y)), 1e-300)
    s2_cp = max(variances[args.cp_variance], floor)
    s2_sp = max(variances[args.sp_variance], floor)
    rss = path.rss
    traces = {"cp": cp_estimated(rss, sd.n, s2_cp), "sp": sp(rss, s2_sp)}
    selected = {"cp": traces["cp"].selected_q, "sp": traces["sp"].selected_q, "stepwise": step.q}

    names = d.names
    if args.criterion == "stepwise":
        chosen_cols = [names[j] for j in step.selected]
        chosen_coef = step.slopes
    else:
        st = path.steps[selected[args.criterion]]
        chosen_cols = [names[j] for j in st.active_set]
        chosen_coef = st.coefficients

    config = dict(resolved, seed=args.seed, max_steps=max_steps, criterion=args.criterion,
                  cp_variance=args.cp_variance, sp_variance=args.sp_variance)
    argv = ["fit"] + _data_argv(resolved) + [
        "--seed", str(args.seed), "--max-steps", str(max_steps),
        "--criterion", args.criterion,
        "--cp-variance", args.cp_variance, "--sp-variance", args.sp_variance,
    ]
    result = {
        "n": d.n,
        "m": d.m,
        "max_steps": cap,
        "path": {
            "rss": [float(v) for v in rss],
            "entered": [names[j] for j in path.steps[-1].active_set],
            "stopped_early": path.stopped_early,
        },
        "criteria": {k: t.to_dict() for k, t in traces.items()},
        "stepwise": {
            "selected": [names[j] for j in step.selected],
            "q": step.q,
            "entry_tsq": list(step.entry_tsq),
            "threshold": step.threshold,
            "sigma2_hat": step.sigma2_hat,
            "df": step.df,
        },
        "selected_q": selected,
        "criterion": args.criterion,
        "chosen": {
            "q": len(chosen_cols),
            "columns": chosen_cols,
            "coefficients": [float(c) for c in chosen_coef],
        },
    }
    if args.out:
        out = Path(args.out)
        text = dump_json(result)
        write_text(out, text)
        man = manifest("fit", argv + ["--out", str(out)], config, args.seed, inputs,
                       {out.name: sha256_text(text)})
        write_text(out.with_name(out.stem + ".manifest.json"), dump_json(man))
    else:
        result["manifest"] = manifest("fit", argv, config, args.seed, inputs, {})
        sys.stdout.write(dump_json(result))
    return EXIT_OK


def cmd_cv(args) -> int:
    d, resolved, inputs = load_input(args)
    methods = tuple(_csv_list(args.methods))
    cfg = CvConfig(
        folds=args.folds,
        reps=args.reps,
        methods=methods,
        max_steps=args.max_steps,
        spurious_k=args.spurious,
        seed=args.seed,
        cp_variance=args.cp_variance,
        sp_variance=args.sp_variance,
    )
    report = reversed_cv(d, cfg, threads=args.threads)
    out = Path(args.out_dir)
    rows_text = report.to_csv()
    summary_text = dump_json(report.summary())
    write_text(out / "rows.csv", rows_text)
    write_text(out / "summary.json", summary_text)
    config = dict(resolved, **cfg.to_dict(), m=d.m, n=d.n, resolved_max_steps=report.max_steps)
    argv = ["cv"] + _data_argv(resolved) + [
        "--folds", str(cfg.folds), "--reps", str(cfg.reps),
        "--methods", ",".join(cfg.methods), "--seed", str(cfg.seed),
        "--max-steps", str(report.max_steps),
        "--cp-variance", cfg.cp_variance, "--sp-variance", cfg.sp_variance,
        "--out-dir", str(out),
    ] + (["--quiet"] if args.quiet else [])
    man = manifest("cv", argv, config, cfg.seed, inputs,
                   {"rows.csv": sha256_text(rows_text), "summary.json": sha256_text(summary_text)})
    write_text(out / "manifest.json", dump_json(man))
    if not args.quiet:
        for method, s in report.summary()["methods"].items():
            print(f"{method:13s} fits={s['fits']:4d} median_q={s['median_q']:6.1f} median_rmse={s['median_rmse']:.3f}")
    return EXIT_OK


def cmd_sim(args) -> int:
    if args.world == "null":
        cfg = SimConfig(0, 0.0, args.n, args.reps, args.seed, _max_q(args.max_q, args.n))
    else:
        n = args.signal + args.noise
        cfg = SimConfig(args.signal, args.mu, args.noise, args.reps, args.seed, _max_q(args.max_q, n))
    summary = simulate_orthogonal(cfg, threads=args.threads)
    out = Path(args.out_dir)
    text = summary.to_csv()
    write_text(out / "summary.csv", text)
    if args.world == "null":
        argv = ["sim", "null", "--n", str(args.n)]
    else:
        argv = ["sim", "signal", "--signal", str(args.signal), "--mu", repr(args.mu),
                "--noise", str(args.noise)]
    argv += ["--reps", str(cfg.reps), "--seed", str(cfg.seed), "--max-q", str(cfg.max_q),
             "--out-dir", str(out)]
    if args.quiet:
        argv.append("--quiet")
    config = dict(cfg.to_dict(), world=args.world)
    man = manifest("sim", argv, config, cfg.seed, {}, {"summary.csv": sha256_text(text)})
    write_text(out / "manifest.json", dump_json(man))
    if not args.quiet:
        print(f"argmin of mean curve: q={summary.argmin}")
    return EXIT_OK


def _max_q(requested, n):
    return min(n, 40) if requested is None else requested


def cmd_data(args) -> int:
    d = load_diabetes(scaled=not args.raw)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(d, out, response="y")
    binary = [c.name for c in d.columns if c.is_binary]
    write_text(Path(str(out) + FLAGS_SUFFIX), dump_json({"response": "y", "binary": binary}))
    return EXIT_OK


def cmd_rerun(args) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        man = json.load(fh)
    for path, digest in man.get("inputs", {}).items():
        if sha256_file(path) != digest:
            raise VarselError(f"input {path} no longer matches the manifest digest")
    argv = list(man["argv"])
    if args.out_dir:
        for flag in ("--out-dir", "--out"):
            if flag in argv:
                i = argv.index(flag)
                old = Path(argv[i + 1])
                argv[i + 1] = str(Path(args.out_dir) / old.name) if flag == "--out" else args.out_dir
    return run(argv)


# ---------------------------------------------------------------------------
# parser


def _add_data_options(p):
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--response", help="name of the response column")
    p.add_argument("--binary", help="comma-separated binary column names (not squared)")
    p.add_argument("--flags", help=f"JSON flag file with 'response' and 'binary' (default: <data>{FLAGS_SUFFIX} if present)")
    p.add_argument("--expand", choices=["quadratic", "none"], default="none")
    p.add_argument("--spurious", type=int, default=0, help="number of Gaussian noise columns to add before expansion")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=None,
                   help="largest LARS model (default 50 for m <= 64, else 64)")
    p.add_argument("--cp-variance", choices=VARIANCE_SOURCES, default="largest_lars")
    p.add_argument("--sp-variance", choices=VARIANCE_SOURCES, default="stepwise")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varsel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"varsel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="LARS path, C_p and S_p traces, and RIC stepwise on one dataset")
    _add_data_options(p)
    p.add_argument("--criterion", choices=["cp", "sp", "stepwise"], default="sp")
    p.add_argument("--out", help="write JSON here (plus a manifest) instead of stdout")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("cv", help="reversed cross-validation of stepwise, LARS+C_p and LARS+S_p")
    _add_data_options(p)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out-dir", default="cv_out")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("sim", help="orthogonal-design Monte Carlo of the C_p curve")
    worlds = p.add_subparsers(dest="world", required=True)
    for world in ("null", "signal"):
        w = worlds.add_parser(world)
        if world == "null":
            w.add_argument("--n", type=int, default=100)
        else:
            w.add_argument("--signal", type=int, default=5)
            w.add_argument("--mu", type=float, default=3.0)
            w.add_argument("--noise", type=int, default=95)
        w.add_argument("--reps", type=int, default=1000)
        w.add_argument("--seed", type=int, default=0)
        w.add_argument("--max-q", type=int, default=None, help="largest q reported (default min(n, 40))")
        w.add_argument("--threads", type=int, default=1)
        w.add_argument("--out-dir", default="sim_out")
        w.add_argument("--quiet", action="store_true")
        w.set_defaults(func=cmd_sim)

    p = sub.add_parser("data", help="export a bundled dataset as CSV plus flag file")
    p.add_argument("name", choices=["diabetes"])
    p.add_argument("--out", default="diabetes.csv")
    p.add_argument("--raw", action="store_true", help="base columns in original units")
    p.set_defaults(func=cmd_data)

    p = sub.add_parser("rerun", help="replay the run recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out-dir", help="write outputs here instead of the recorded location")
    p.set_defaults(func=cmd_rerun)
    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"varsel: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"varsel: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ZeroVarianceError as exc:
        print(f"varsel: zero-variance column {exc.column!r}", file=sys.stderr)
        return EXIT_ZERO_VARIANCE
    except ColumnError as exc:
        print(f"varsel: column error: {exc}", file=sys.stderr)
        return EXIT_COLUMN
    except ConfigError as exc:
        print(f"varsel: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (VarselError, json.JSONDecodeError) as exc:
        print(f"varsel: {exc}", file=sys.stderr)
        return EXIT_DATA


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
