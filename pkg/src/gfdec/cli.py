"""Command line front end.

Subcommands: ber (Monte Carlo sweep), diag (single-word decoding tables),
circuit (dataflow graph export), validate (alist / config checking).
Every ExperimentConfig field has a flag; flags override config-file values.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import bench
from .bench import ConfigError, ExperimentConfig, read_config
from .channel import sigma_from_snr
from .circuit import build_circuit_graph, emit_dot, emit_netlist
from .codes import AlistError, build_encoder, read_alist
from .dynamics import EulerParams
from .potential import PotentialParams


def _add_experiment_flags(p, require_code=True):
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--code", help="alist file" + ("" if require_code else " (required)"))
    p.add_argument("--decoder", choices=bench.DECODERS)
    p.add_argument("--snr", help="comma-separated SNR list in dB, e.g. 2,3,4")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="master seed (required)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--T", type=float, dest="T")
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--init", choices=["zero", "scaled"])
    p.add_argument("--delta", type=float)
    p.add_argument("--early-stop", action="store_true", default=None)
    p.add_argument("--bp-iterations", type=int)
    p.add_argument("--gdbf-theta", type=float)
    p.add_argument("--gdbf-iterations", type=int)
    p.add_argument("--min-error-events", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true", default=None)
    p.add_argument("--output", help="CSV path (default: stdout)")


def _merge_config(args):
    overrides = {}
    for f in dataclasses.fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            overrides[f.name] = v
    if getattr(args, "snr", None) is not None:
        overrides["snr_db"] = tuple(float(s) for s in args.snr.split(",") if s.strip())
    if args.config:
        base = read_config(args.config)
        return dataclasses.replace(base, **overrides)
    if "code" not in overrides:
        raise ConfigError("--code (or --config with a code entry) is required")
    return ExperimentConfig(**overrides)


def _cmd_ber(args):
    cfg = _merge_config(args)
    if cfg.seed is None:
        raise ConfigError("--seed is required for ber")
    records = bench.run_ber_sweep(cfg, log=lambda msg: print(msg, file=sys.stderr))
    csv = bench.records_to_csv(records)
    if cfg.output:
        bench.write_records(records, cfg.output)
        print(f"wrote {cfg.output}", file=sys.stderr)
    else:
        sys.stdout.write(csv)
    return 0


def _cmd_diag(args):
    cfg = _merge_config(args)
    if cfg.seed is None:
        raise ConfigError("--seed is required for diag")
    H = read_alist(cfg.code)
    encoder = build_encoder(H)
    sigma = sigma_from_snr(cfg.snr_db[0], encoder.k / H.n)
    bits, y = bench.draw_trial(encoder, sigma, cfg.seed, args.trial)
    pot = PotentialParams(cfg.alpha, cfg.beta)
    euler = EulerParams(cfg.T, cfg.N, cfg.init, cfg.delta)
    times = tuple(float(t) for t in args.times.split(",") if t.strip())
    paths = bench.emit_diagnostics(H, y, pot, euler, args.outdir, times)
    print(f"transmitted word: {''.join(map(str, bits))}", file=sys.stderr)
    for name in sorted(paths):
        print(paths[name])
    return 0


def _cmd_circuit(args):
    H = read_alist(args.code)
    g = build_circuit_graph(H, PotentialParams(args.alpha, args.beta), args.delta)
    text = emit_netlist(g) if args.format == "netlist" else emit_dot(g)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_validate(args):
    if not args.code and not args.config:
        raise ConfigError("nothing to validate: pass --code and/or --config")
    if args.code:
        H = read_alist(args.code)
        encoder = build_encoder(H)
        print(f"{args.code}: n={H.n} m={H.m} edges={H.num_edges} "
              f"rank={H.n - encoder.k} k={encoder.k} rate={encoder.k / H.n:g}")
    if args.config:
        cfg = read_config(args.config)
        print(f"{args.config}: ok")
        sys.stdout.write(bench.render_config(cfg))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="gfdec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ber", help="run a BER/WER sweep, emit CSV")
    _add_experiment_flags(p)
    p.set_defaults(func=_cmd_ber)

    p = sub.add_parser("diag", help="single-word decoding tables (energy, snapshots, trajectory)")
    _add_experiment_flags(p)
    p.add_argument("--trial", type=int, default=0, help="trial index to draw (default 0)")
    p.add_argument("--times", default="0.1,1", help="snapshot times, comma separated")
    p.add_argument("--outdir", default=".", help="directory for the tables")
    p.set_defaults(func=_cmd_diag)

    p = sub.add_parser("circuit", help="export the analog decoder dataflow graph")
    p.add_argument("--code", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--format", choices=["dot", "netlist"], default="dot")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_circuit)

    p = sub.add_parser("validate", help="check an alist file and/or a config file")
    p.add_argument("--code")
    p.add_argument("--config")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, AlistError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
