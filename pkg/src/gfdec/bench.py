"""BER sweep harness: experiment configs, deterministic Monte Carlo, CSV output.

Reproducibility contract: every trial's randomness comes from
trial_rng(seed, trial_index), so the transmitted word and noise for a given
(seed, trial) pair are identical no matter which decoder consumes them and
no matter how trials are spread over workers.  Trials are processed in
fixed-size chunks in trial order; the optional min_error_events stop rule
is evaluated at chunk boundaries only, keeping totals worker-count
independent.  Wall-clock seconds are recorded only when timing is enabled
(off by default so output files are byte-identical across runs).
"""

from __future__ import annotations

import multiprocessing
import os
import time
from dataclasses import dataclass, fields

import numpy as np

from .baselines import BpParams, GdbfParams, bp_decode_batch, gdbf_decode_batch
from .channel import sigma_from_snr, transmit, trial_rng
from .codes import binary_to_bipolar, build_encoder, hard_decision, random_codeword, read_alist
from .dynamics import EulerParams, decode, decode_batch
from .potential import PotentialParams

CHUNK_TRIALS = 1024

DECODERS = ("gf", "bp", "gdbf")

CSV_HEADER = "decoder,snr_db,trials,bit_errors,word_errors,divergences,ber,wer,seconds"


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a code, a decoder, SNR points, and everything that seeds it.

    Defaults follow the reference parameter table: alpha=1, beta=2, T=10,
    N=1000, zero initialization.
    """

    code: str
    decoder: str = "gf"
    snr_db: tuple = (2.0, 3.0, 4.0, 5.0, 6.0)
    trials: int = 10000
    seed: int | None = None
    alpha: float = 1.0
    beta: float = 2.0
    T: float = 10.0
    N: int = 1000
    init: str = "zero"
    delta: float = 0.01
    early_stop: bool = False
    bp_iterations: int = 100
    gdbf_theta: float = -0.6
    gdbf_iterations: int = 100
    min_error_events: int = 0
    workers: int = 1
    timing: bool = False
    output: str | None = None

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; expected one of {DECODERS}")
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if not self.snr_db:
            raise ValueError("snr_db must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.min_error_events < 0:
            raise ValueError("min_error_events must be nonnegative")
        if self.init not in ("zero", "scaled"):
            raise ValueError("init must be 'zero' or 'scaled'")


@dataclass(frozen=True)
class BerRecord:
    decoder: str
    snr_db: float
    trials: int
    bit_errors: int
    word_errors: int
    divergences: int
    ber: float
    wer: float
    seconds: float


# ---------------------------------------------------------------------------
# Config file format: flat key=value, '#' comments, unknown keys rejected
# ---------------------------------------------------------------------------

_FIELD_TYPES = {f.name: f for f in fields(ExperimentConfig)}

_INT_KEYS = {"trials", "seed", "N", "bp_iterations", "gdbf_iterations",
             "min_error_events", "workers"}
_FLOAT_KEYS = {"alpha", "beta", "T", "delta", "gdbf_theta"}
_BOOL_KEYS = {"early_stop", "timing"}
_STR_KEYS = {"code", "decoder", "init", "output"}

_KEY_ORDER = ("code", "decoder", "snr_db", "trials", "seed", "alpha", "beta",
              "T", "N", "init", "delta", "early_stop", "bp_iterations",
              "gdbf_theta", "gdbf_iterations", "min_error_events", "workers",
              "timing", "output")


class ConfigError(ValueError):
    pass


def _fmt_number(x):
    # integers render bare so defaults read alpha=1, T=10, not alpha=1.0
    if float(x) == int(x):
        return str(int(x))
    return repr(float(x))


def render_config(cfg):
    """Serialize a config to the key=value format parse_config reads back."""
    lines = []
    for key in _KEY_ORDER:
        value = getattr(cfg, key)
        if value is None:
            continue
        if key == "snr_db":
            text = ",".join(_fmt_number(s) for s in value)
        elif key in _BOOL_KEYS:
            text = "true" if value else "false"
        elif key in _FLOAT_KEYS:
            text = _fmt_number(value)
        else:
            text = str(value)
        lines.append(f"{key}={text}")
    return "\n".join(lines) + "\n"


def _parse_value(key, text, lineno):
    try:
        if key == "snr_db":
            parts = [p.strip() for p in text.split(",") if p.strip()]
            if not parts:
                raise ValueError("empty list")
            return tuple(float(p) for p in parts)
        if key in _INT_KEYS:
            return int(text)
        if key in _FLOAT_KEYS:
            return float(text)
        if key in _BOOL_KEYS:
            if text == "true":
                return True
            if text == "false":
                return False
            raise ValueError("expected true or false")
        return text
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None


def parse_config(text):
    """Parse key=value config text into an ExperimentConfig.

    Unknown and duplicate keys are rejected with their line number; an
    empty file is an error rather than a bag of defaults.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, val, lineno)
    if not values:
        raise ConfigError("empty config: at least 'code' must be set")
    if "code" not in values:
        raise ConfigError("missing required key 'code'")
    try:
        return ExperimentConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def read_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# Sweep runner
# ---------------------------------------------------------------------------

def draw_trial(encoder, sigma, seed, trial):
    """Transmitted bits and received word for one (seed, trial) pair.

    The single source of randomness for the harness: decoders never draw,
    so gf/bp/gdbf see identical noise at identical trial indices.
    """
    rng = trial_rng(seed, trial)
    bits = random_codeword(encoder, rng)
    y = transmit(binary_to_bipolar(bits), sigma, rng)
    return bits, y


def _draw_chunk(encoder, sigma, seed, start, stop):
    n = encoder.H.n
    bits = np.empty((stop - start, n), dtype=np.uint8)
    Y = np.empty((stop - start, n))
    for r, t in enumerate(range(start, stop)):
        bits[r], Y[r] = draw_trial(encoder, sigma, seed, t)
    return bits, Y


def _decode_chunk(H, cfg, sigma, Y):
    """Hard decisions plus divergence count for one chunk of received words."""
    if cfg.decoder == "gf":
        pot = PotentialParams(cfg.alpha, cfg.beta)
        euler = EulerParams(cfg.T, cfg.N, cfg.init, cfg.delta)
        res = decode_batch(H, Y, pot, euler, early_stop=cfg.early_stop)
        return hard_decision(res.final_states), int(res.diverged.sum())
    if cfg.decoder == "bp":
        posterior, _, _ = bp_decode_batch(H, Y, sigma, BpParams(cfg.bp_iterations))
        return hard_decision(posterior), 0
    gp = GdbfParams(cfg.gdbf_iterations, cfg.gdbf_theta)
    X, _, _ = gdbf_decode_batch(H, Y, gp)
    return hard_decision(X), 0


_POOL_STATE = {}


def _pool_init(H, encoder, cfg):
    _POOL_STATE["H"] = H
    _POOL_STATE["encoder"] = encoder
    _POOL_STATE["cfg"] = cfg


def _pool_chunk(task):
    sigma, start, stop = task
    H = _POOL_STATE["H"]
    cfg = _POOL_STATE["cfg"]
    bits, Y = _draw_chunk(_POOL_STATE["encoder"], sigma, cfg.seed, start, stop)
    words, div = _decode_chunk(H, cfg, sigma, Y)
    wrong = words != bits
    return stop - start, int(wrong.sum()), int(wrong.any(axis=1).sum()), div


def _chunk_bounds(trials):
    for start in range(0, trials, CHUNK_TRIALS):
        yield start, min(start + CHUNK_TRIALS, trials)


def run_ber_sweep(cfg, H=None, log=None):
    """Run the sweep and return one BerRecord per SNR point.

    Totals depend only on (config, seed): chunks are tallied in trial
    order and the min_error_events cutoff fires at chunk boundaries, so
    any worker count reproduces the same records byte for byte.
    """
    if cfg.seed is None:
        raise ValueError("a master seed is required for a BER sweep")
    if H is None:
        H = read_alist(cfg.code)
    encoder = build_encoder(H)
    rate = encoder.k / H.n
    pool = None
    try:
        if cfg.workers > 1:
            pool = multiprocessing.get_context("fork").Pool(
                cfg.workers, initializer=_pool_init, initargs=(H, encoder, cfg)
            )
        else:
            _pool_init(H, encoder, cfg)
        records = []
        for snr in cfg.snr_db:
            sigma = sigma_from_snr(snr, rate)
            t0 = time.perf_counter()
            tasks = ((sigma, a, b) for a, b in _chunk_bounds(cfg.trials))
            results = pool.imap(_pool_chunk, tasks) if pool else map(_pool_chunk, tasks)
            done = bit_err = word_err = div = 0
            for ntr, nbit, nword, ndiv in results:
                done += ntr
                bit_err += nbit
                word_err += nword
                div += ndiv
                if cfg.min_error_events and word_err >= cfg.min_error_events:
                    break
            seconds = time.perf_counter() - t0 if cfg.timing else 0.0
            rec = BerRecord(cfg.decoder, snr, done, bit_err, word_err, div,
                            bit_err / (done * H.n), word_err / done, seconds)
            records.append(rec)
            if log is not None:
                log(f"{cfg.decoder} snr={snr:g} trials={done} ber={rec.ber:.3e} wer={rec.wer:.3e}")
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()
    return records


def records_to_csv(records):
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.decoder},{_fmt_number(r.snr_db)},{r.trials},{r.bit_errors},"
            f"{r.word_errors},{r.divergences},{r.ber!r},{r.wer!r},{r.seconds:.3f}"
        )
    return "\n".join(lines) + "\n"


def write_records(records, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(records_to_csv(records))


# ---------------------------------------------------------------------------
# Single-word diagnostics: energy decay, state snapshots, solution curves
# ---------------------------------------------------------------------------

def emit_diagnostics(H, y, pot, euler, outdir, snapshot_times=(0.1, 1.0)):
    """Decode one word, writing the decoding-process tables under outdir.

    energy.tsv       step-by-step total energy (decay curve)
    snapshot_t*.tsv  per-index state at each requested time
    trajectory.tsv   time, energy, and every coordinate at every step
    Returns {name: path} for everything written.
    """
    os.makedirs(outdir, exist_ok=True)
    times = np.arange(euler.N + 1) * euler.eta
    res = decode(H, y, pot, euler, sample_times=times)
    traj = res.trajectory

    paths = {}

    path = os.path.join(outdir, "energy.tsv")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("time\tenergy\n")
        for t, e in zip(traj.times, traj.energies):
            fh.write(f"{t:.17g}\t{e:.17g}\n")
    paths["energy"] = path

    for t_want in snapshot_times:
        k = int(round(t_want / euler.eta))
        if not 0 <= k <= euler.N:
            raise ValueError(f"snapshot time {t_want} outside [0, {euler.T}]")
        name = f"snapshot_t{_fmt_number(t_want)}.tsv"
        path = os.path.join(outdir, name)
        with open(path, "w", encoding="ascii") as fh:
            fh.write("index\tx\n")
            for j, v in enumerate(traj.states[k], start=1):
                fh.write(f"{j}\t{v:.17g}\n")
        paths[name[:-4]] = path

    path = os.path.join(outdir, "trajectory.tsv")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("time\tenergy\t" + "\t".join(f"x{j + 1}" for j in range(H.n)) + "\n")
        for t, e, row in zip(traj.times, traj.energies, traj.states):
            fh.write(f"{t:.17g}\t{e:.17g}\t" + "\t".join(f"{v:.17g}" for v in row) + "\n")
    paths["trajectory"] = path
    return paths
