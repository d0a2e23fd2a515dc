"""BPSK-over-AWGN transmission with reproducible per-trial noise streams.

The SNR (dB) to noise mapping is sigma = sqrt(0.5 * 10^(-snr/10) / R) for a
design rate R.  Every Monte-Carlo trial owns an independent random stream
keyed by (master_seed, trial_index) alone, so every decoder compared on
trial k sees the identical codeword and noise regardless of how trials are
chunked across workers.

Determinism note: streams are numpy PCG64 generators seeded through
SeedSequence spawn keys; standard_normal uses the ziggurat method.  For a
pinned numpy version the sequences are reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def sigma_from_snr(snr_db, rate):
    """Noise standard deviation sqrt((1/2) * 10^(-snr_db/10) / rate)."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"design rate must lie in (0, 1], got {rate}")
    return math.sqrt(0.5 * 10.0 ** (-snr_db / 10.0) / rate)


@dataclass(frozen=True)
class ChannelParams:
    snr_db: float
    rate: float

    @property
    def sigma(self):
        return sigma_from_snr(self.snr_db, self.rate)


def transmit(s, sigma, rng):
    """Received word y = s + sigma * g, g elementwise standard normal."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    s = np.asarray(s, dtype=np.float64)
    return s + sigma * rng.standard_normal(s.shape)


def trial_rng(master_seed, trial_index):
    """Independent generator for one Monte-Carlo trial.

    Deterministic in (master_seed, trial_index); streams for distinct trial
    indices are statistically independent.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index,)))
