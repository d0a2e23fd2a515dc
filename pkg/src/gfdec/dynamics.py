"""Gradient-flow decoding by explicit fixed-step Euler integration.

The decoder integrates dx/dt = -(x - y + grad_h(x)) from a configurable
initial point and reads the output as the hard decision of the state at
t = T.  The step recursion is x <- x - eta * total_gradient(x) with
eta = T/N.  A sup-norm guard catches blow-ups from too-coarse steps: the
trial is marked diverged and the last finite state is kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import check_products, hard_decision, syndrome
from .potential import _gradient_and_energy, total_energy, total_gradient

# sup-norm beyond which a trajectory counts as diverged
GUARD_SUP_NORM = 1.0e3

_INIT_POLICIES = ("zero", "scaled", "explicit")


@dataclass
class EulerParams:
    """Integration window [0, T] split into N bins of width eta = T/N.

    init_policy selects x(0): "zero" starts at the origin, "scaled" at
    delta * y, "explicit" at a caller-supplied x0.
    """

    T: float = 10.0
    N: int = 1000
    init_policy: str = "zero"
    delta: float = 0.01
    x0: np.ndarray | None = None

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.init_policy not in _INIT_POLICIES:
            raise ValueError(f"init_policy must be one of {_INIT_POLICIES}")
        if self.init_policy == "explicit" and self.x0 is None:
            raise ValueError("explicit init_policy requires x0")

    @property
    def eta(self):
        return self.T / self.N


@dataclass
class Trajectory:
    """States sampled along one decode, with their total energies."""

    times: np.ndarray
    states: np.ndarray
    energies: np.ndarray


@dataclass
class DecodeResult:
    final_state: np.ndarray
    hard_word: np.ndarray
    syndrome_ok: bool
    diverged: bool
    iterations: int
    trajectory: Trajectory | None = None


@dataclass
class BatchDecodeResult:
    """Raw output of decode_batch; row b is trial b."""

    final_states: np.ndarray
    diverged: np.ndarray
    iterations: np.ndarray
    sampled_states: np.ndarray | None = None
    step_energies: np.ndarray | None = None


def initial_state(euler, y):
    """x(0) for a received word (or batch of words) under the init policy."""
    y = np.asarray(y, dtype=np.float64)
    if euler.init_policy == "zero":
        return np.zeros_like(y)
    if euler.init_policy == "scaled":
        return euler.delta * y
    x0 = np.asarray(euler.x0, dtype=np.float64)
    if x0.shape[-1] != y.shape[-1]:
        raise ValueError("x0 length does not match the received word")
    return np.broadcast_to(x0, y.shape).copy()


def euler_step(x, y, H, params, eta):
    """One explicit Euler update x - eta * total_gradient(x).

    A non-finite result is the divergence signal; decode() handles it.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    return x - eta * total_gradient(H, params, x, y)


def _states_in_code(H, x):
    signs = np.where(np.asarray(x) < 0, -1.0, 1.0)
    return np.all(check_products(H, signs) == 1.0, axis=-1)


def decode_batch(H, Y, params, euler, *, early_stop=False, sample_steps=None,
                 record_energies=False):
    """Integrate many received words at once.

    Y has shape (B, n).  Rows evolve independently and each row's arithmetic
    is identical to a single-word decode, so batching never changes results.
    sample_steps (sorted ints in [0, N]) stores state snapshots; with
    record_energies the total energy at every step k = 0..N is kept.
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[1] != H.n:
        raise ValueError(f"Y must have shape (B, {H.n})")
    if not np.all(np.isfinite(Y)):
        raise ValueError("non-finite entry in received words")
    B = Y.shape[0]
    N = euler.N
    eta = euler.eta

    X = initial_state(euler, Y)
    diverged = np.zeros(B, dtype=bool)
    iterations = np.full(B, N, dtype=np.int64)
    active = np.arange(B)

    sampled = None
    sample_slots = {}
    if sample_steps is not None:
        for s, k in enumerate(sample_steps):
            sample_slots.setdefault(int(k), []).append(s)
        sampled = np.empty((len(sample_steps), B, H.n))
    step_energies = np.empty((N + 1, B)) if record_energies else None

    # initial state may already violate the guard (explicit policy)
    bad = ~np.all(np.abs(X) <= GUARD_SUP_NORM, axis=-1)
    if bad.any():
        diverged[bad] = True
        iterations[bad] = 0
        active = active[~bad]
    if record_energies:
        step_energies[0] = total_energy(H, params, X, Y)
    for s in sample_slots.get(0, ()):
        sampled[s] = X

    for k in range(1, N + 1):
        stepped = active
        if stepped.size:
            xa = X[stepped]
            grad, _ = _gradient_and_energy(H, params, xa, Y[stepped], False)
            xn = xa - eta * grad
            finite = np.all(np.isfinite(xn), axis=-1)
            if not finite.all():
                # keep the last finite state for rows that blew up
                xn[~finite] = xa[~finite]
            inside = np.all(np.abs(xn) <= GUARD_SUP_NORM, axis=-1)
            X[stepped] = xn
            stopped = ~(finite & inside)
            if stopped.any():
                rows = stepped[stopped]
                diverged[rows] = True
                iterations[rows] = np.where(finite[stopped], k, k - 1)
                active = stepped[~stopped]
        if early_stop and active.size:
            done = _states_in_code(H, X[active])
            if done.any():
                iterations[active[done]] = k
                active = active[~done]
        if record_energies:
            step_energies[k] = step_energies[k - 1]
            if stepped.size:
                step_energies[k, stepped] = total_energy(H, params, X[stepped], Y[stepped])
        for s in sample_slots.get(k, ()):
            sampled[s] = X

    return BatchDecodeResult(X, diverged, iterations, sampled, step_energies)


def _resolve_sample_times(sample_times, euler):
    """Snap requested times to the integration grid {k*eta}."""
    eta = euler.eta
    steps = []
    for t in sample_times:
        t = float(t)
        if t < -1e-12 or t > euler.T * (1 + 1e-12):
            raise ValueError(f"sample time {t} outside [0, {euler.T}]")
        steps.append(min(euler.N, max(0, round(t / eta))))
    steps = sorted(set(steps))
    return steps, np.array([k * eta for k in steps])


def decode(H, y, params, euler, *, sample_times=None, early_stop=False):
    """Gradient-flow decode of a single received word.

    Runs N Euler steps from the policy's initial point and hard-decides the
    final state.  sample_times (within [0, T], snapped to the step grid)
    attach a Trajectory to the result.  With early_stop the syndrome is
    checked every bin and integration exits on success.
    """
    y = np.asarray(y, dtype=np.float64)
    sample_steps = None
    times = None
    if sample_times is not None:
        sample_steps, times = _resolve_sample_times(sample_times, euler)
    res = decode_batch(
        H, y[None, :], params, euler, early_stop=early_stop, sample_steps=sample_steps
    )
    final = res.final_states[0]
    word = hard_decision(final)
    ok = not syndrome(H, word).any()
    trajectory = None
    if sample_steps is not None:
        states = res.sampled_states[:, 0, :]
        energies = total_energy(H, params, states, np.broadcast_to(y, states.shape))
        trajectory = Trajectory(times, states, np.atleast_1d(energies))
    return DecodeResult(final, word, bool(ok), bool(res.diverged[0]),
                        int(res.iterations[0]), trajectory)


def decode_word(H, y, params, euler):
    """Hard-decision output of decode() with trajectory capture disabled."""
    return decode(H, y, params, euler).hard_word


def format_trajectory(trajectory):
    """Plain-text table: one row per sample holding time, energy, states."""
    lines = ["# time energy " + " ".join(f"x{j + 1}" for j in range(trajectory.states.shape[1]))]
    for t, e, row in zip(trajectory.times, trajectory.energies, trajectory.states):
        lines.append(f"{t:.17g} {e:.17g} " + " ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def write_trajectory(trajectory, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_trajectory(trajectory))
