"""Analog decoder dataflow: the division-form gradient as a circuit graph.

The gradient entry for bit k can be rewritten with per-check products
z_i = prod_{j in A(i)} x_j and a division by x_k:

    dx_k/dt = V(w_k, x_k, y_k) = -x_k + y_k - 4a(x_k^2-1)x_k - 2b w_k / x_k
    w_k     = sum_{i in B(k)} U(z_i),   U(z) = (z - 1) z

which is algebraically equal to the leave-one-out form whenever x_k != 0.
The decomposition maps onto six node kinds: inputs y_k, product nodes z_i,
nonlinearities U_i, adders w_k, update nodes V_k, and integrators INT_k,
with each integrator output fed back into its check products and its own V.

Because of the 1/x_k the circuit cannot start from the all-zero state; the
integrators are initialized to delta * y_k for a small nonzero delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import ParityCheckMatrix, check_products, column_sums, hard_decision
from .dynamics import DecodeResult, EulerParams, GUARD_SUP_NORM
from .potential import PotentialParams

# below this magnitude the 1/x_k stage is considered shorted
NEAR_ZERO = 1.0e-12


class CircuitSimulationError(RuntimeError):
    """A state coordinate hit the division guard during simulation."""


@dataclass(frozen=True)
class CircuitNode:
    kind: str  # input | product | u_node | adder | v_node | integrator
    name: str
    inputs: tuple = ()


@dataclass
class CircuitGraph:
    H: ParityCheckMatrix
    params: PotentialParams
    delta: float
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)  # (src_name, dst_name) wires

    def node_names(self, kind):
        return [nd.name for nd in self.nodes if nd.kind == kind]


def build_circuit_graph(H, params=None, delta=0.01):
    """Assemble the dataflow graph for the division-form dynamics.

    Node counts: n inputs, m products, m u_nodes, n adders, n v_nodes,
    n integrators.  Wires: integrator->product fan-ins (one per 1 of H),
    u_node->adder fan-ins (one per 1 of H), plus y_k->V_k, INT_k->V_k
    feedback, and V_k->INT_k, for 2*nnz + 3n edges total.  The z_i->U_i
    and w_k->V_k couplings are index-implicit (fused stages), not wires.
    """
    if params is None:
        params = PotentialParams()
    if delta == 0:
        raise ValueError("delta must be nonzero: the division form cannot start at x = 0")
    g = CircuitGraph(H, params, float(delta))

    y = [f"y_{k + 1}" for k in range(H.n)]
    z = [f"z_{i + 1}" for i in range(H.m)]
    u = [f"U_{i + 1}" for i in range(H.m)]
    w = [f"w_{k + 1}" for k in range(H.n)]
    v = [f"V_{k + 1}" for k in range(H.n)]
    integ = [f"INT_{k + 1}" for k in range(H.n)]

    for k in range(H.n):
        g.nodes.append(CircuitNode("input", y[k]))
    for i in range(H.m):
        g.nodes.append(CircuitNode("product", z[i], tuple(integ[j] for j in H.rows[i])))
    for i in range(H.m):
        g.nodes.append(CircuitNode("u_node", u[i], (z[i],)))
    for k in range(H.n):
        g.nodes.append(CircuitNode("adder", w[k], tuple(u[i] for i in H.cols[k])))
    for k in range(H.n):
        g.nodes.append(CircuitNode("v_node", v[k], (w[k], integ[k], y[k])))
    for k in range(H.n):
        g.nodes.append(CircuitNode("integrator", integ[k], (v[k],)))

    for i in range(H.m):
        for j in H.rows[i]:
            g.edges.append((integ[j], z[i]))
    for k in range(H.n):
        for i in H.cols[k]:
            g.edges.append((u[i], w[k]))
    for k in range(H.n):
        g.edges.append((y[k], v[k]))
        g.edges.append((integ[k], v[k]))
        g.edges.append((v[k], integ[k]))
    return g


def division_gradient(H, params, x, y):
    """Total gradient computed the circuit way: 2*beta*w_k/x_k for the code term.

    Only defined for states with no zero coordinate; equals total_gradient
    there up to roundoff.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.any(np.abs(x) < NEAR_ZERO):
        raise ZeroDivisionError("division form undefined at x_k = 0")
    ops = H.edge_ops()
    z = check_products(H, x)
    uz = (z - 1.0) * z
    w = column_sums(H, uz[..., ops.edge_row])
    return (x - y) + 4.0 * params.alpha * (x * x - 1.0) * x + 2.0 * params.beta * w / x


def simulate_circuit(g, y, euler=None):
    """Euler-integrate the circuit dynamics from x(0) = delta * y.

    Raises CircuitSimulationError if any |x_k| drops below the division
    guard, naming the step and coordinate.  On trajectories that stay away
    from zero the result tracks the division-free decoder step for step.
    """
    if euler is None:
        euler = EulerParams(init_policy="scaled", delta=g.delta)
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (g.H.n,):
        raise ValueError(f"y must have shape ({g.H.n},)")

    eta = euler.eta
    x = g.delta * y
    bad = np.nonzero(np.abs(x) < NEAR_ZERO)[0]
    if bad.size:
        raise CircuitSimulationError(
            f"initial state: |x_{bad[0] + 1}| < {NEAR_ZERO:g} (received word has a near-zero entry)"
        )
    for step in range(1, euler.N + 1):
        x = x - eta * division_gradient(g.H, g.params, x, y)
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > GUARD_SUP_NORM:
            word = hard_decision(np.where(np.isfinite(x), x, 0.0))
            return DecodeResult(x, word, False, True, step)
        bad = np.nonzero(np.abs(x) < NEAR_ZERO)[0]
        if bad.size:
            raise CircuitSimulationError(
                f"step {step}: |x_{bad[0] + 1}| < {NEAR_ZERO:g}, division stage shorted"
            )
    word = hard_decision(x)
    ok = bool(np.all(check_products(g.H, np.where(x < 0, -1.0, 1.0)) == 1.0))
    return DecodeResult(x, word, ok, False, euler.N)


def emit_dot(g):
    """Render the graph as Graphviz DOT, stable ordering for golden files.

    The computational nodes are drawn; y inputs appear as label attributes
    on their V nodes rather than as separate nodes.  The fused z->U and
    w->V couplings are drawn as wires for readability.
    """
    a, b, d = g.params.alpha, g.params.beta, g.delta
    lines = [
        "digraph circuit {",
        "  rankdir=LR;",
        f'  label="gradient flow decoder (alpha={a:g}, beta={b:g}, delta={d:g})";',
        "  node [shape=box];",
    ]
    for i in range(g.H.m):
        lines.append(f'  z_{i + 1} [label="z_{i + 1}\\nprod"];')
    for i in range(g.H.m):
        lines.append(f'  U_{i + 1} [label="U_{i + 1}\\n(z-1)z"];')
    for k in range(g.H.n):
        lines.append(f'  w_{k + 1} [label="w_{k + 1}\\nsum"];')
    for k in range(g.H.n):
        lines.append(f'  V_{k + 1} [label="V_{k + 1}\\ninput y_{k + 1}"];')
    for k in range(g.H.n):
        lines.append(f'  INT_{k + 1} [label="INT_{k + 1}\\n1/s", shape=ellipse];')
    for i in range(g.H.m):
        for j in g.H.rows[i]:
            lines.append(f"  INT_{j + 1} -> z_{i + 1};")
    for i in range(g.H.m):
        lines.append(f"  z_{i + 1} -> U_{i + 1};")
    for k in range(g.H.n):
        for i in g.H.cols[k]:
            lines.append(f"  U_{i + 1} -> w_{k + 1};")
    for k in range(g.H.n):
        lines.append(f"  w_{k + 1} -> V_{k + 1};")
    for k in range(g.H.n):
        lines.append(f"  V_{k + 1} -> INT_{k + 1};")
        lines.append(f"  INT_{k + 1} -> V_{k + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_netlist(g):
    """Flat netlist, one line per node: type name inputs..."""
    out = []
    for nd in g.nodes:
        parts = [nd.kind, nd.name]
        parts.extend(nd.inputs)
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"
