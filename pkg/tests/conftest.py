"""Shared fixtures and small independent oracles.

The oracle helpers here deliberately avoid the library's vectorized kernels:
GF(2) elimination over dense int arrays, plain-Python products and sums.
Tests compare the fast paths against these.
"""

import os

import numpy as np
import pytest

from gfdec.codes import ParityCheckMatrix, read_alist

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CODES_DIR = os.path.join(REPO_ROOT, "codes")


def code_path(name):
    return os.path.join(CODES_DIR, name)


@pytest.fixture(name="code_path", scope="session")
def code_path_fixture():
    return code_path


@pytest.fixture(scope="session")
def repetition():
    return read_alist(code_path("repetition2.alist"))


@pytest.fixture(scope="session")
def worked_3x6():
    return read_alist(code_path("example_3x6.alist"))


@pytest.fixture(scope="session")
def code96():
    return read_alist(code_path("96.33.964.alist"))


@pytest.fixture(scope="session")
def code204():
    return read_alist(code_path("204.33.484.alist"))


# ---------------------------------------------------------------------------
# dense GF(2) oracles
# ---------------------------------------------------------------------------

def dense_syndrome(H, bits):
    return (H.to_dense().astype(np.int64) @ np.asarray(bits, dtype=np.int64)) % 2


def gf2_rank(dense):
    A = dense.astype(np.uint8).copy() % 2
    m, n = A.shape
    r = 0
    for c in range(n):
        rows = np.nonzero(A[r:, c])[0]
        if rows.size == 0:
            continue
        A[[r, r + rows[0]]] = A[[r + rows[0], r]]
        for i in range(m):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        r += 1
        if r == m:
            break
    return r


def enumerate_codewords(H):
    """All binary codewords of H by exhaustive scan; only for small n."""
    n = H.n
    assert n <= 14, "exhaustive enumeration is for tiny codes"
    D = H.to_dense().astype(np.int64)
    words = []
    for v in range(2 ** n):
        bits = np.array([(v >> j) & 1 for j in range(n)], dtype=np.int64)
        if not ((D @ bits) % 2).any():
            words.append(bits.astype(np.uint8))
    return words


def random_parity_matrix(rng, max_n=10, max_m=6, exact=False):
    """A small valid ParityCheckMatrix with every column used."""
    n = max_n if exact else int(rng.integers(2, max_n + 1))
    m = max_m if exact else int(rng.integers(1, max_m + 1))
    while True:
        rows = []
        for _ in range(m):
            deg = int(rng.integers(1, n + 1))
            rows.append(sorted(rng.choice(n, size=deg, replace=False).tolist()))
        used = set()
        for r in rows:
            used.update(r)
        if len(used) == n:
            return ParityCheckMatrix(rows, n)
