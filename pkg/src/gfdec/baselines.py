"""Reference decoders: sum-product belief propagation and multi-bit GDBF.

Both return the same DecodeResult shape as the gradient-flow decoder so the
benchmark harness treats all decoders uniformly.  Non-convergence within the
iteration budget is a normal outcome, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import check_products, column_sums, hard_decision, leave_one_out_products
from .dynamics import DecodeResult

# message clamp keeping tanh strictly inside (-1, 1)
LLR_LIMIT = 30.0


@dataclass
class BpParams:
    max_iterations: int = 100
    early_stop: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class GdbfParams:
    max_iterations: int = 100
    theta: float = -0.6
    mode: str = "multi_bit"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.theta > 0:
            raise ValueError("flip threshold theta must be <= 0")
        if self.mode != "multi_bit":
            raise ValueError("only the multi_bit mode is implemented")


def _bipolar_signs(x):
    return np.where(np.asarray(x) < 0, -1.0, 1.0)


def _rows_in_code(H, x):
    return np.all(check_products(H, _bipolar_signs(x)) == 1.0, axis=-1)


# ---------------------------------------------------------------------------
# Sum-product BP
# ---------------------------------------------------------------------------

def bp_decode_batch(H, Y, sigma, params=None):
    """Flooding sum-product decoding of a batch of received words.

    Channel LLRs are 2*y/sigma^2; check-to-variable updates use the exact
    tanh rule with messages clamped to +/-LLR_LIMIT.  Returns (posteriors,
    iterations, converged); rows are independent, so batch and single-word
    calls produce bit-identical numbers.
    """
    if params is None:
        params = BpParams()
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[1] != H.n:
        raise ValueError(f"Y must have shape (B, {H.n})")
    ops = H.edge_ops()
    B = Y.shape[0]

    channel = 2.0 * Y / (sigma * sigma)
    posterior = channel.copy()
    c2v = np.zeros((B, ops.nnz))
    iterations = np.zeros(B, dtype=np.int64)
    converged = np.zeros(B, dtype=bool)
    active = np.arange(B)

    if params.early_stop:
        done = _rows_in_code(H, posterior)
        converged[done] = True
        active = active[~done]

    for it in range(1, params.max_iterations + 1):
        if active.size == 0:
            break
        v2c = posterior[active][:, ops.edge_col] - c2v[active]
        np.clip(v2c, -LLR_LIMIT, LLR_LIMIT, out=v2c)
        loo, _ = leave_one_out_products(H, np.tanh(0.5 * v2c))
        with np.errstate(divide="ignore"):
            out = 2.0 * np.arctanh(loo)
        np.clip(out, -LLR_LIMIT, LLR_LIMIT, out=out)
        post = channel[active] + column_sums(H, out)
        c2v[active] = out
        posterior[active] = post
        iterations[active] = it
        if params.early_stop:
            done = _rows_in_code(H, post)
            if done.any():
                converged[active[done]] = True
                active = active[~done]

    if active.size:
        converged[active] = _rows_in_code(H, posterior[active])
    return posterior, iterations, converged


def bp_decode(H, y, sigma, params=None):
    """Sum-product decode of one received word; final_state holds posterior LLRs."""
    y = np.asarray(y, dtype=np.float64)
    posterior, iterations, converged = bp_decode_batch(H, y[None, :], sigma, params)
    word = hard_decision(posterior[0])
    return DecodeResult(posterior[0], word, bool(converged[0]), False, int(iterations[0]))


# ---------------------------------------------------------------------------
# Multi-bit gradient descent bit flipping
# ---------------------------------------------------------------------------

def gdbf_objective(H, x, y):
    """sum_k x_k y_k + sum_i prod_{j in A(i)} x_j (maximized by flips)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.sum(x * y, axis=-1) + np.sum(check_products(H, x), axis=-1)


def gdbf_inversion(H, x, y):
    """Per-bit inversion values Delta_k = x_k y_k + sum_{i in B(k)} prod_{j in A(i)} x_j."""
    ops = H.edge_ops()
    z = check_products(H, x)
    return x * y + column_sums(H, z[..., ops.edge_row])


def gdbf_step(H, x, y, theta):
    """One multi-bit GDBF update on a bipolar state.

    Flips every bit with Delta_k < theta; when none qualifies, flips the
    single argmin Delta_k instead.  Returns (new_x, n_flips, fallback_used).
    """
    delta = gdbf_inversion(H, x, y)
    flips = delta < theta
    fallback = not flips.any()
    if fallback:
        flips = np.zeros_like(flips)
        flips[np.argmin(delta)] = True
    return np.where(flips, -x, x), int(flips.sum()), fallback


def gdbf_decode_batch(H, Y, params=None):
    """Multi-bit GDBF on a batch, starting from x = sign(y).

    Returns (states, iterations, converged) with states in {-1, +1}.
    """
    if params is None:
        params = GdbfParams()
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[1] != H.n:
        raise ValueError(f"Y must have shape (B, {H.n})")
    ops = H.edge_ops()
    B = Y.shape[0]

    X = _bipolar_signs(Y)
    iterations = np.zeros(B, dtype=np.int64)
    converged = np.zeros(B, dtype=bool)
    active = np.arange(B)

    for it in range(1, params.max_iterations + 1):
        if active.size == 0:
            break
        z = check_products(H, X[active])
        sat = np.all(z == 1.0, axis=-1)
        if sat.any():
            converged[active[sat]] = True
            active = active[~sat]
            z = z[~sat]
        if active.size == 0:
            break
        xa = X[active]
        delta = xa * Y[active] + column_sums(H, z[:, ops.edge_row])
        flips = delta < params.theta
        none = ~flips.any(axis=-1)
        if none.any():
            rows = np.nonzero(none)[0]
            flips[rows, np.argmin(delta[rows], axis=-1)] = True
        X[active] = np.where(flips, -xa, xa)
        iterations[active] = it

    if active.size:
        done = np.all(check_products(H, X[active]) == 1.0, axis=-1)
        converged[active[done]] = True
    return X, iterations, converged


def gdbf_decode(H, y, params=None):
    """Multi-bit GDBF decode of one received word."""
    y = np.asarray(y, dtype=np.float64)
    X, iterations, converged = gdbf_decode_batch(H, y[None, :], params)
    word = hard_decision(X[0])
    return DecodeResult(X[0], word, bool(converged[0]), False, int(iterations[0]))
