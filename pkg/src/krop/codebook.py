"""Codebook construction and sampling.

Four families of prototype embeddings, each viewed as the rows of an
N x N matrix with N = 2^K:

- normal:    entries i.i.d. normal with mean 0, variance 1/N
- binary:    entries i.i.d. uniform over +-1/sqrt(N)
- sylvester: rows of the recursive +-1 Hadamard matrix, normalized
- krop:      rows of the Kronecker rotation-product matrix, an
             orthogonal symmetric generalization of the Hadamard
             construction parameterized by K angles

A krop codebook is never stored whole on production paths: the K angles
define it implicitly, any single row materializes in O(N), and the full
matrix is built only for tests and direct-cleanup baselines.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .hrr import is_power_of_two

TAU = 2.0 * math.pi

SCHEME_EVEN = "evenly-spaced"
SCHEME_UNIFORM = "uniform-random"

FAMILY_NORMAL = "normal"
FAMILY_BINARY = "binary"
FAMILY_SYLVESTER = "sylvester"
FAMILY_KROP_MATERIALIZED = "krop-materialized"

# Full materialization of a 2^K x 2^K matrix; 14 keeps it near 2 GiB.
MATERIALIZE_K_MAX = 14


@dataclass(frozen=True, eq=False)
class KropParams:
    """The K angles that implicitly define a 2^K x 2^K rotation-product codebook.

    Each angle must lie strictly inside (0, 2*pi). ``scheme`` and ``seed``
    are provenance metadata carried through the JSON round trip.
    """

    thetas: np.ndarray
    scheme: str = "explicit"
    seed: int | None = None

    def __post_init__(self) -> None:
        thetas = np.array(self.thetas, dtype=np.float64)
        if thetas.ndim != 1 or thetas.size < 1:
            raise ValueError("thetas must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(thetas)):
            raise ValueError("thetas contains non-finite values")
        if np.any(thetas <= 0.0) or np.any(thetas >= TAU):
            raise ValueError("every angle must lie strictly inside (0, 2*pi)")
        thetas.flags.writeable = False
        object.__setattr__(self, "thetas", thetas)

    @property
    def K(self) -> int:
        return int(self.thetas.size)

    @property
    def N(self) -> int:
        return 2 ** self.K


@dataclass(frozen=True, eq=False)
class ExplicitCodebook:
    """A materialized codebook: row i is the embedding of symbol i."""

    rows: np.ndarray
    family: str = "normal"

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2:
            raise ValueError(f"rows must be 2-D, got shape {rows.shape}")
        if rows.shape[1] < 2 or not is_power_of_two(rows.shape[1]):
            raise ValueError(
                f"row dimension must be a power of two >= 2, got {rows.shape[1]}"
            )
        object.__setattr__(self, "rows", rows)

    @property
    def count(self) -> int:
        return int(self.rows.shape[0])

    @property
    def dim(self) -> int:
        return int(self.rows.shape[1])

    def row(self, index: int) -> np.ndarray:
        if not 0 <= index < self.count:
            raise IndexError(f"row index {index} out of range [0, {self.count})")
        return self.rows[index].copy()


def krop_params(
    K: int,
    scheme: str = SCHEME_EVEN,
    rng: np.random.Generator | int | None = None,
) -> KropParams:
    """Choose the K angles of a rotation-product codebook.

    ``evenly-spaced`` places them on the interior grid
    theta_k = (k+1) * 2*pi / (K+1), so endpoints are always excluded;
    ``uniform-random`` draws them i.i.d. from the open interval (0, 2*pi)
    and requires ``rng`` (a Generator or a seed).
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if scheme == SCHEME_EVEN:
        thetas = (np.arange(K, dtype=np.float64) + 1.0) * (TAU / (K + 1))
        return KropParams(thetas=thetas, scheme=scheme, seed=None)
    if scheme == SCHEME_UNIFORM:
        if rng is None:
            raise ValueError("uniform-random scheme requires an rng or seed")
        seed = None
        if isinstance(rng, (int, np.integer)):
            seed = int(rng)
            from .rng import rng_from_seed

            rng = rng_from_seed(seed)
        thetas = rng.uniform(0.0, TAU, size=K)
        # uniform() draws from the half-open [0, 2*pi); redraw exact zeros
        # so the open-interval invariant holds.
        while np.any(thetas == 0.0):
            zero = thetas == 0.0
            thetas[zero] = rng.uniform(0.0, TAU, size=int(zero.sum()))
        return KropParams(thetas=thetas, scheme=scheme, seed=seed)
    raise ValueError(f"unknown theta scheme: {scheme!r}")


def krop_row(params: KropParams, index: int) -> np.ndarray:
    """Materialize row ``index`` of the implicit codebook in O(N) time and space.

    The row is built by K doubling steps: step k scales the current
    prefix by (cos, sin) of theta_k when bit k of ``index`` (least
    significant first) is 0, and by (sin, -cos) when it is 1. Every row
    has unit Euclidean norm up to rounding.
    """
    K = params.K
    if not 0 <= index < 2 ** K:
        raise IndexError(f"row index {index} out of range [0, {2 ** K})")
    out = np.empty(2 ** K, dtype=np.float64)
    out[0] = 1.0
    width = 1
    for k in range(K):
        c = math.cos(params.thetas[k])
        s = math.sin(params.thetas[k])
        head = out[:width]
        tail = out[width : 2 * width]
        if (index >> k) & 1 == 0:
            np.multiply(head, s, out=tail)
            head *= c
        else:
            np.multiply(head, -c, out=tail)
            head *= s
        width *= 2
    return out


def krop_materialize(params: KropParams) -> ExplicitCodebook:
    """Build the full 2^K x 2^K rotation-product matrix.

    Test oracle and direct-cleanup baseline only; production clean-up
    never holds the whole matrix. Refuses K > MATERIALIZE_K_MAX.
    """
    K = params.K
    if K > MATERIALIZE_K_MAX:
        raise ValueError(
            f"K={K} materializes a {2**K}x{2**K} matrix; limit is {MATERIALIZE_K_MAX}"
        )
    n = 2 ** K
    h = np.empty((n, n), dtype=np.float64)
    h[0, 0] = 1.0
    for k in range(K):
        m = 2 ** k
        c = math.cos(params.thetas[k])
        s = math.sin(params.thetas[k])
        block = h[:m, :m]
        h[:m, m : 2 * m] = s * block
        h[m : 2 * m, :m] = s * block
        h[m : 2 * m, m : 2 * m] = -c * block
        block *= c
    return ExplicitCodebook(rows=h, family=FAMILY_KROP_MATERIALIZED)


def sylvester_codebook(K: int) -> ExplicitCodebook:
    """Rows of the recursive +-1 Hadamard matrix of order 2^K, scaled to unit norm."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if K > MATERIALIZE_K_MAX:
        raise ValueError(
            f"K={K} materializes a {2**K}x{2**K} matrix; limit is {MATERIALIZE_K_MAX}"
        )
    n = 2 ** K
    h = np.empty((n, n), dtype=np.float64)
    h[0, 0] = 1.0
    for k in range(K):
        m = 2 ** k
        block = h[:m, :m]
        h[:m, m : 2 * m] = block
        h[m : 2 * m, :m] = block
        h[m : 2 * m, m : 2 * m] = -block
    h *= 1.0 / math.sqrt(n)
    return ExplicitCodebook(rows=h, family=FAMILY_SYLVESTER)


def _check_sample_args(N: int, count: int) -> None:
    if N < 2 or not is_power_of_two(N):
        raise ValueError(f"N must be a power of two >= 2, got {N}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")


def sample_normal_codebook(
    N: int, count: int, rng: np.random.Generator
) -> ExplicitCodebook:
    """``count`` rows with entries i.i.d. normal(0, 1/N)."""
    _check_sample_args(N, count)
    rows = rng.normal(0.0, 1.0 / math.sqrt(N), size=(count, N))
    return ExplicitCodebook(rows=rows, family=FAMILY_NORMAL)


def sample_binary_codebook(
    N: int, count: int, rng: np.random.Generator
) -> ExplicitCodebook:
    """``count`` rows with entries i.i.d. uniform over +-1/sqrt(N)."""
    _check_sample_args(N, count)
    # Same entry constant as sign clean-up (1.0 / math.sqrt(N)) so that
    # cleaned vectors compare bit-equal against stored rows.
    scale = 1.0 / math.sqrt(N)
    bits = rng.integers(0, 2, size=(count, N))
    rows = np.where(bits == 1, scale, -scale)
    return ExplicitCodebook(rows=rows, family=FAMILY_BINARY)


def save_params(params: KropParams, path: str | Path) -> None:
    """Write the angles to JSON, preserving full float64 precision."""
    payload = {
        "K": params.K,
        "thetas": [float(t) for t in params.thetas],
        "scheme": params.scheme,
        "seed": params.seed,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_params(path: str | Path) -> KropParams:
    """Read angles back from JSON; rejects malformed or out-of-range files."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: expected a JSON object")
    try:
        K = payload["K"]
        thetas = payload["thetas"]
    except KeyError as exc:
        raise ValueError(f"{path}: missing field {exc}") from exc
    if not isinstance(K, int) or K < 1:
        raise ValueError(f"{path}: K must be a positive integer, got {K!r}")
    if not isinstance(thetas, list) or len(thetas) != K:
        raise ValueError(f"{path}: thetas must be a list of K={K} floats")
    scheme = payload.get("scheme", "explicit")
    seed = payload.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ValueError(f"{path}: seed must be an integer or null")
    return KropParams(thetas=np.array(thetas, dtype=np.float64), scheme=scheme, seed=seed)
