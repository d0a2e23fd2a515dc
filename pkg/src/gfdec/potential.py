"""Code potential energy and its analytic gradients.

The energy has two sum-of-squares terms: a bipolarity penalty alpha*(x_j^2-1)^2
per variable and a parity penalty beta*(prod_{j in A(i)} x_j - 1)^2 per check.
It is nonnegative everywhere and zero exactly on the bipolar codewords.  The
gradient uses leave-one-out per-check products (prefix/suffix form), so it is
defined at x_k = 0 and involves no division anywhere.

All functions accept a single state of shape (n,) or a batch (..., n) and
evaluate row-wise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import check_products, parity_penalty_terms


@dataclass(frozen=True)
class PotentialParams:
    """Weights of the bipolarity (alpha) and parity (beta) penalties."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")


def _checked_state(H, x, name="x"):
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != H.n:
        raise ValueError(f"{name} has length {x.shape[-1]}, code length is {H.n}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"non-finite entry in {name}")
    return x


def code_energy(H, params, x):
    """alpha * sum_j (x_j^2-1)^2 + beta * sum_i (prod_{j in A(i)} x_j - 1)^2."""
    x = _checked_state(H, x)
    bipolar = np.sum((x * x - 1.0) ** 2, axis=-1)
    residual = check_products(H, x) - 1.0
    return params.alpha * bipolar + params.beta * np.sum(residual * residual, axis=-1)


def code_energy_gradient(H, params, x):
    """Analytic gradient of code_energy, entry k:

    4*alpha*(x_k^2-1)*x_k
      + 2*beta * sum_{i in B(k)} (prod_{j in A(i)} x_j - 1) * prod_{j in A(i)\\{k}} x_j
    """
    x = _checked_state(H, x)
    return _code_gradient(H, params, x)


def _code_gradient(H, params, x):
    sums, _ = parity_penalty_terms(H, x)
    grad = 4.0 * params.alpha * (x * x - 1.0) * x
    grad += 2.0 * params.beta * sums
    return grad


def total_energy(H, params, x, y):
    """0.5 * ||x - y||^2 + code_energy(x)."""
    x = _checked_state(H, x)
    y = _checked_state(H, y, "y")
    diff = x - y
    return 0.5 * np.sum(diff * diff, axis=-1) + code_energy(H, params, x)


def total_gradient(H, params, x, y):
    """(x - y) + code_energy_gradient(x)."""
    x = _checked_state(H, x)
    y = _checked_state(H, y, "y")
    return (x - y) + _code_gradient(H, params, x)


def _gradient_and_energy(H, params, x, y, want_energy):
    """Fused unchecked kernel for integrator hot loops.

    Shares the per-check products between the gradient and the energy; the
    caller guarantees finite inputs of the right width.
    """
    sums, full = parity_penalty_terms(H, x)
    diff = x - y
    # association mirrors total_gradient = (x - y) + code_gradient exactly
    code = 4.0 * params.alpha * (x * x - 1.0) * x
    code += 2.0 * params.beta * sums
    grad = diff + code
    if not want_energy:
        return grad, None
    # association mirrors total_energy = 0.5||x-y||^2 + code_energy exactly
    residual = full - 1.0
    code = params.alpha * np.sum((x * x - 1.0) ** 2, axis=-1) + params.beta * np.sum(
        residual * residual, axis=-1
    )
    energy = 0.5 * np.sum(diff * diff, axis=-1) + code
    return grad, energy
