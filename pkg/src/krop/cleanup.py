"""Clean-up: mapping a noisy unbound vector to its nearest prototype.

Three routes with different cost/guarantee trade-offs:

- krop_cleanup:   argmax of the implicit rotation-product codebook's
                  scores, computed by a Walsh-Hadamard-style butterfly
                  in O(N log N) time and O(N) working space.
- direct_cleanup: dense matrix-vector scoring against an explicit
                  codebook, O(N * |V|).
- sign_cleanup:   O(N) rounding onto the +-1/sqrt(N) alphabet; cheap,
                  but not guaranteed to land on a stored prototype.

Argmax ties always break toward the lowest index so the butterfly and
dense routes are comparable. All functions are pure; each call owns its
scratch buffers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codebook import ExplicitCodebook, KropParams, krop_row
from .hrr import as_hypervector

# Two top scores closer than this are a near-tie: the butterfly and dense
# routes accumulate rounding differently, so their argmax may differ.
NEAR_TIE_MARGIN = 1e-9


@dataclass
class CleanupResult:
    """Outcome of one clean-up call.

    ``index`` is the winning codebook row (None for sign clean-up, which
    has no indexed codebook), ``vector`` the cleaned hypervector, and
    ``scores`` the full similarity vector when the strategy computes one.
    """

    index: int | None
    vector: np.ndarray
    scores: np.ndarray | None = None


def _transform_rows(params: KropParams, rows: np.ndarray) -> np.ndarray:
    """Batched butterfly product of the implicit codebook with each row.

    Ping-pongs between two flat buffers; at level k the buffer holds the
    N / 2^k working sub-vectors of width 2^k contiguously in index
    order, and one pass emits the cos/sin mixtures of each sub-vector's
    halves into the other buffer. After K passes the buffer holds the
    full score vector in row order.
    """
    K = params.K
    n = 2 ** K
    cos = np.cos(params.thetas)
    sin = np.sin(params.thetas)
    batch = rows.shape[0]
    buf_a = np.array(rows, dtype=np.float64)
    buf_b = np.empty_like(buf_a)
    num = 1
    width = n
    for k in range(K - 1, -1, -1):
        half = width // 2
        src = buf_a.reshape(batch, num, 2, half)
        dst = buf_b.reshape(batch, num, 2, half)
        c = cos[k]
        s = sin[k]
        np.multiply(src[:, :, 0, :], c, out=dst[:, :, 0, :])
        dst[:, :, 0, :] += s * src[:, :, 1, :]
        np.multiply(src[:, :, 0, :], s, out=dst[:, :, 1, :])
        dst[:, :, 1, :] -= c * src[:, :, 1, :]
        buf_a, buf_b = buf_b, buf_a
        num *= 2
        width = half
    return buf_a


def krop_transform(params: KropParams, u) -> np.ndarray:
    """Score vector of the implicit codebook against ``u`` in O(N log N).

    Entry i equals the dot product of codebook row i with ``u``. The
    transform is a linear isometry and, because the codebook matrix is
    symmetric orthogonal, its own inverse.
    """
    uv = as_hypervector(u, "u")
    if uv.size != params.N:
        raise ValueError(
            f"dimension mismatch: u has {uv.size}, params define N={params.N}"
        )
    return _transform_rows(params, uv[np.newaxis, :])[0]


def krop_cleanup(params: KropParams, u) -> CleanupResult:
    """Nearest codebook row by butterfly scoring; ties go to the lowest index.

    Returns the winning index, the row itself (materialized in O(N)),
    and the full score vector.
    """
    scores = krop_transform(params, u)
    index = int(np.argmax(scores))
    return CleanupResult(index=index, vector=krop_row(params, index), scores=scores)


def direct_cleanup(codebook: ExplicitCodebook, u) -> CleanupResult:
    """Nearest codebook row by dense dot-product scores; ties to the lowest index."""
    uv = as_hypervector(u, "u")
    if uv.size != codebook.dim:
        raise ValueError(
            f"dimension mismatch: u has {uv.size}, codebook rows have {codebook.dim}"
        )
    scores = codebook.rows @ uv
    index = int(np.argmax(scores))
    return CleanupResult(index=index, vector=codebook.rows[index].copy(), scores=scores)


def sign_cleanup(u) -> CleanupResult:
    """Round each entry onto +-1/sqrt(N); zero rounds up to +1/sqrt(N).

    O(N). Returns no index: the result may not be any stored prototype
    when prototypes were sampled rather than enumerated.
    """
    uv = as_hypervector(u, "u")
    scale = 1.0 / math.sqrt(uv.size)
    vector = np.where(uv >= 0.0, scale, -scale)
    return CleanupResult(index=None, vector=vector, scores=None)
