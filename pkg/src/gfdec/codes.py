"""LDPC code model: sparse parity-check matrices, alist I/O, GF(2) encoding.

A code is held as a `ParityCheckMatrix` storing both adjacency directions of
the Tanner graph: for check i the set of incident variables (a row), and for
variable j the set of incident checks (a column).  All indices are 0-based
internally; the 1-based alist convention is converted at the file boundary.
"""

from __future__ import annotations

import numpy as np


class AlistError(ValueError):
    """Malformed alist text; message carries the 1-based line number."""


def _as_index_array(indices, upper, what):
    arr = np.asarray(sorted(int(i) for i in indices), dtype=np.int32)
    if arr.size == 0:
        raise ValueError(f"empty {what}")
    if arr[0] < 0 or arr[-1] >= upper:
        raise ValueError(f"{what} index out of range [0, {upper})")
    if np.any(arr[1:] == arr[:-1]):
        raise ValueError(f"duplicate index in {what}")
    return arr


class ParityCheckMatrix:
    """Binary parity-check matrix with dual (row and column) adjacency.

    rows[i] holds the sorted variable indices of check i, cols[j] the sorted
    check indices of variable j.  Instances are immutable after construction
    and safe to share across worker processes/threads.
    """

    def __init__(self, rows, n):
        rows = list(rows)
        if len(rows) < 1 or n < 1:
            raise ValueError("need at least one check and one variable")
        self.m = len(rows)
        self.n = int(n)
        self.rows = tuple(_as_index_array(r, self.n, f"row {i}") for i, r in enumerate(rows))
        col_lists = [[] for _ in range(self.n)]
        for i, row in enumerate(self.rows):
            for j in row:
                col_lists[j].append(i)
        self.cols = tuple(_as_index_array(c, self.m, f"column {j}") for j, c in enumerate(col_lists))
        self._ops = None

    @classmethod
    def from_dense(cls, matrix):
        matrix = np.asarray(matrix)
        return cls([np.nonzero(row)[0] for row in matrix], matrix.shape[1])

    def to_dense(self):
        dense = np.zeros((self.m, self.n), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            dense[i, row] = 1
        return dense

    @property
    def num_edges(self):
        return int(sum(len(r) for r in self.rows))

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.m == other.m
            and self.n == other.n
            and all(np.array_equal(a, b) for a, b in zip(self.rows, other.rows))
        )

    def __repr__(self):
        return f"ParityCheckMatrix(m={self.m}, n={self.n}, edges={self.num_edges})"

    # The edge-indexing tables below drive every vectorized Tanner-graph
    # operation (syndromes, per-check products, message passing).  They are
    # derived data; dropped on pickling and rebuilt on demand.
    def edge_ops(self):
        if self._ops is None:
            self._ops = _EdgeOps(self)
        return self._ops

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_ops"] = None
        return state


def _as_slice(idx):
    """A basic slice equivalent to the consecutive index array, else the array."""
    if len(idx) and np.array_equal(idx, np.arange(idx[0], idx[0] + len(idx))):
        return slice(int(idx[0]), int(idx[0]) + len(idx))
    return idx


class _EdgeOps:
    """Gather/scatter index tables for per-edge arithmetic on a fixed matrix.

    Edges are enumerated row-major (check 0's variables first, ascending).
    `groups` buckets checks by degree so per-check products reduce over a
    rectangular (num_checks, degree) view; `col_order`/`col_ptr` re-sort the
    same edges column-major for per-variable sums.
    """

    def __init__(self, H):
        degrees = np.array([len(r) for r in H.rows], dtype=np.int64)
        self.nnz = int(degrees.sum())
        self.row_ptr = np.concatenate([[0], np.cumsum(degrees)])
        self.edge_col = np.concatenate(H.rows).astype(np.int64)
        self.edge_row = np.repeat(np.arange(H.m, dtype=np.int64), degrees)
        self.groups = []
        for d in np.unique(degrees):
            checks = np.nonzero(degrees == d)[0]
            pos = self.row_ptr[checks][:, None] + np.arange(d)[None, :]
            # base marks groups whose edges fill one contiguous stride-d block,
            # letting scatters use plain slicing instead of index arrays
            base = int(pos[0, 0]) if np.array_equal(np.diff(pos[:, 0]), np.full(len(checks) - 1, d)) else None
            self.groups.append((int(d), _as_slice(checks), self.edge_col[pos], pos, base))
        self.col_order = np.argsort(self.edge_col, kind="stable")
        col_degrees = np.array([len(c) for c in H.cols], dtype=np.int64)
        full_col_ptr = np.concatenate([[0], np.cumsum(col_degrees)])
        self.col_ptr = full_col_ptr[:-1]
        # same degree bucketing column-side; gidx points into row-major edge order
        self.col_groups = []
        for d in np.unique(col_degrees):
            cols = np.nonzero(col_degrees == d)[0]
            slots = full_col_ptr[cols][:, None] + np.arange(d)[None, :]
            self.col_groups.append((int(d), _as_slice(cols), self.col_order[slots]))


def _loo_slabs(v):
    """Leave-one-out products of a list of equal-shape slabs, division-free.

    v[j] holds slot j of every degree-d check; returns (lo, full) with
    lo[j] = prod of the other slots.  Unrolled prefix/suffix products: for
    degree axes this short, per-run cumprod overhead swamps the arithmetic.
    """
    d = len(v)
    if d == 1:
        return [np.ones_like(v[0])], v[0]
    pre = [v[0]]
    suf = [None] * d
    suf[d - 1] = v[d - 1]
    for j in range(1, d):
        pre.append(pre[j - 1] * v[j])
        suf[d - 1 - j] = suf[d - j] * v[d - 1 - j]
    lo = [suf[1]]
    for j in range(1, d - 1):
        lo.append(pre[j - 1] * suf[j + 1])
    lo.append(pre[d - 2])
    return lo, pre[d - 1]


def _edge_slot(arr, pos, base, d, j):
    """Read slot j of a degree group from an edge-order array (view when strided)."""
    if base is None:
        return arr[..., pos[:, j]]
    count = pos.shape[0]
    return arr[..., base + j : base + (count - 1) * d + j + 1 : d]


def _put_edge_slot(arr, pos, base, d, j, values):
    """Write slot j of a degree group into an edge-order array."""
    if base is None:
        arr[..., pos[:, j]] = values
    else:
        count = pos.shape[0]
        arr[..., base + j : base + (count - 1) * d + j + 1 : d] = values


def check_products(H, x):
    """Per-check products prod_{j in A(i)} x_j.

    x may be (n,) or batched (..., n); the result matches with m in place of n.
    """
    ops = H.edge_ops()
    out = np.empty(x.shape[:-1] + (H.m,), dtype=x.dtype)
    for d, checks, cols, _, _ in ops.groups:
        acc = x[..., cols[:, 0]]
        for j in range(1, d):
            acc *= x[..., cols[:, j]]
        out[..., checks] = acc
    return out


def leave_one_out_products(H, edge_values):
    """Products over each check excluding one edge at a time, division-free.

    edge_values holds one value per Tanner-graph edge in row-major edge order,
    shape (..., nnz).  Returns (loo, full) where loo[..., e] is the product of
    the other values on e's check and full[..., i] the whole product of check i.
    """
    ops = H.edge_ops()
    loo = np.empty_like(edge_values)
    full = np.empty(edge_values.shape[:-1] + (H.m,), dtype=edge_values.dtype)
    for d, checks, _, pos, base in ops.groups:
        lo, z = _loo_slabs([_edge_slot(edge_values, pos, base, d, j) for j in range(d)])
        for j in range(d):
            _put_edge_slot(loo, pos, base, d, j, lo[j])
        full[..., checks] = z
    return loo, full


def column_sums(H, edge_values):
    """Per-variable sums of row-major per-edge values, shape (..., n)."""
    ops = H.edge_ops()
    out = np.empty(edge_values.shape[:-1] + (H.n,), dtype=edge_values.dtype)
    for d, cols, gidx in ops.col_groups:
        # gidx is an index array, so this gather is always a fresh buffer
        acc = edge_values[..., gidx[:, 0]]
        for j in range(1, d):
            acc += edge_values[..., gidx[:, j]]
        out[..., cols] = acc
    return out


def parity_penalty_terms(H, x):
    """Parity-gradient sums and per-check products in one grouped pass.

    Returns (sums, full) where
      sums[..., k] = sum_{i in B(k)} (z_i - 1) * prod_{j in A(i)\\{k}} x_j
      full[..., i] = z_i = prod_{j in A(i)} x_j
    Bitwise identical to composing leave_one_out_products and column_sums;
    this fused form just skips the intermediate edge-order round trips.
    """
    ops = H.edge_ops()
    edge_terms = np.empty(x.shape[:-1] + (ops.nnz,), dtype=np.float64)
    full = np.empty(x.shape[:-1] + (H.m,), dtype=np.float64)
    for d, checks, cols, pos, base in ops.groups:
        lo, z = _loo_slabs([x[..., cols[:, j]] for j in range(d)])
        full[..., checks] = z
        res = z - 1.0
        for j in range(d):
            _put_edge_slot(edge_terms, pos, base, d, j, lo[j] * res)
    return column_sums(H, edge_terms), full


def syndrome(H, bits):
    """Syndrome H b over GF(2); entry i is the XOR of b over A(i)."""
    bits = np.asarray(bits)
    if bits.shape[-1] != H.n:
        raise ValueError(f"word length {bits.shape[-1]} != code length {H.n}")
    ops = H.edge_ops()
    sums = np.add.reduceat(bits[..., ops.edge_col].astype(np.int64), ops.row_ptr[:-1], axis=-1)
    return (sums & 1).astype(np.uint8)


def binary_to_bipolar(bits):
    """Map bits to symbols: 0 -> +1, 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def hard_decision(x):
    """Map a real state to bits: x_j >= 0 -> 0, x_j < 0 -> 1 (ties go to +1)."""
    x = np.asarray(x)
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite entry in state")
    return (x < 0).astype(np.uint8)


# ---------------------------------------------------------------------------
# alist file format
# ---------------------------------------------------------------------------

def _ints(line, lineno):
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise AlistError(f"line {lineno}: expected whitespace-separated integers") from None


def parse_alist(text):
    """Parse alist text into a ParityCheckMatrix.

    Layout: "n m", "max_col_degree max_row_degree", n column degrees, m row
    degrees, then n column-adjacency lines (1-based check indices) and m
    row-adjacency lines (1-based variable indices).  Padding zeros are
    ignored.  Raises AlistError with a line number on malformed input.
    """
    lines = text.splitlines()

    def get_line(idx):
        if idx >= len(lines):
            raise AlistError(f"line {idx + 1}: unexpected end of file")
        return lines[idx]

    header = _ints(get_line(0), 1)
    if len(header) != 2:
        raise AlistError("line 1: header must be 'n m'")
    n, m = header
    if n < 1 or m < 1:
        raise AlistError("line 1: n and m must be positive")
    max_degrees = _ints(get_line(1), 2)
    if len(max_degrees) != 2:
        raise AlistError("line 2: expected 'max_col_degree max_row_degree'")
    max_col_deg, max_row_deg = max_degrees

    col_degrees = _ints(get_line(2), 3)
    if len(col_degrees) != n:
        raise AlistError(f"line 3: expected {n} column degrees, got {len(col_degrees)}")
    row_degrees = _ints(get_line(3), 4)
    if len(row_degrees) != m:
        raise AlistError(f"line 4: expected {m} row degrees, got {len(row_degrees)}")
    if max(col_degrees) > max_col_deg or max(row_degrees) > max_row_deg:
        raise AlistError("line 3: a declared degree exceeds the stated maximum")

    def read_adjacency(first_line, count, degrees, upper, max_deg, what):
        out = []
        for k in range(count):
            lineno = first_line + k
            entries = _ints(get_line(lineno - 1), lineno)
            if len(entries) > max_deg:
                raise AlistError(f"line {lineno}: {len(entries)} entries exceed max degree {max_deg}")
            nonzero = [e for e in entries if e != 0]
            if len(nonzero) != degrees[k]:
                raise AlistError(
                    f"line {lineno}: {what} {k + 1} lists {len(nonzero)} entries, degree says {degrees[k]}"
                )
            for e in nonzero:
                if e < 1 or e > upper:
                    raise AlistError(f"line {lineno}: index {e} out of range [1, {upper}]")
            out.append(sorted(e - 1 for e in nonzero))
        return out

    cols = read_adjacency(5, n, col_degrees, m, max_col_deg, "column")
    rows = read_adjacency(5 + n, m, row_degrees, n, max_row_deg, "row")

    for tail in range(5 + n + m, len(lines)):
        if lines[tail].strip():
            raise AlistError(f"line {tail + 1}: trailing content after adjacency lists")

    H = ParityCheckMatrix(rows, n)
    for j in range(n):
        if list(H.cols[j]) != cols[j]:
            raise AlistError(
                f"line {5 + j}: column {j + 1} adjacency disagrees with the row lists (duality violation)"
            )
    return H


def read_alist(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_alist(fh.read())


def write_alist(H):
    """Render a matrix as alist text; parse_alist(write_alist(H)) == H."""
    col_degrees = [len(c) for c in H.cols]
    row_degrees = [len(r) for r in H.rows]
    lines = [
        f"{H.n} {H.m}",
        f"{max(col_degrees)} {max(row_degrees)}",
        " ".join(str(d) for d in col_degrees),
        " ".join(str(d) for d in row_degrees),
    ]
    for col in H.cols:
        lines.append(" ".join(str(i + 1) for i in col))
    for row in H.rows:
        lines.append(" ".join(str(j + 1) for j in row))
    return "\n".join(lines) + "\n"


def write_alist_file(H, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(write_alist(H))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

class Encoder:
    """Systematic GF(2) encoder built by Gaussian elimination.

    Stores the k message positions plus, for each pivot (parity) position,
    the set of message positions whose XOR yields it.  Rank-deficient
    matrices are accepted; k = n - rank(H).
    """

    def __init__(self, H):
        self.H = H
        A = H.to_dense()
        m, n = A.shape
        pivot_cols = []
        r = 0
        for c in range(n):
            hits = np.nonzero(A[r:, c])[0]
            if hits.size == 0:
                continue
            pivot = r + hits[0]
            if pivot != r:
                A[[r, pivot]] = A[[pivot, r]]
            others = np.nonzero(A[:, c])[0]
            others = others[others != r]
            A[others] ^= A[r]
            pivot_cols.append(c)
            r += 1
            if r == m:
                break
        self.rank = r
        self.k = n - r
        self.parity_positions = np.array(pivot_cols, dtype=np.int64)
        mask = np.ones(n, dtype=bool)
        mask[self.parity_positions] = False
        self.message_positions = np.nonzero(mask)[0]
        # parity_masks[t, :] selects the message bits XORed into parity t
        self.parity_masks = A[:r][:, self.message_positions]

    def encode(self, message_bits):
        message_bits = np.asarray(message_bits, dtype=np.uint8)
        if message_bits.shape != (self.k,):
            raise ValueError(f"message must have length {self.k}")
        word = np.zeros(self.H.n, dtype=np.uint8)
        word[self.message_positions] = message_bits
        word[self.parity_positions] = (self.parity_masks @ message_bits.astype(np.int64)) & 1
        return word


def build_encoder(H):
    return Encoder(H)


def random_codeword(encoder, rng):
    """Uniformly random codeword, as binary bits (map with binary_to_bipolar to transmit)."""
    message = rng.integers(0, 2, size=encoder.k, dtype=np.uint8)
    return encoder.encode(message)
