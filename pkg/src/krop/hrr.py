"""Holographic reduced representation operators.

Binding is circular convolution, unbinding is circular correlation, and
superposition is element-wise addition over fixed-dimension real vectors
("hypervectors"). Hypervector length is always a power of two, which lets
both binding operators run in O(N log N) through an internal iterative
radix-2 decimation-in-time FFT with bit-reversal and twiddle tables
cached per length.

All operators are pure: inputs are never mutated, results are freshly
allocated, and the cached transform tables are read-only after creation,
so concurrent calls are safe.
"""

from __future__ import annotations

import threading

import numpy as np
from numpy.typing import NDArray

HyperVector = NDArray[np.float64]

_TABLE_LOCK = threading.Lock()
_TABLES: dict[tuple[int, bool], tuple[np.ndarray, list[np.ndarray]]] = {}


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def as_hypervector(x, name: str = "vector") -> HyperVector:
    """Validate ``x`` as a finite 1-D float64 vector of power-of-two length >= 2."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {v.shape}")
    if v.size < 2 or not is_power_of_two(v.size):
        raise ValueError(f"{name} length must be a power of two >= 2, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def _bit_reverse_indices(n: int) -> np.ndarray:
    # Vectorised 32-bit reversal; callers guarantee 2 <= n <= 2**32.
    bits = n.bit_length() - 1
    rev = np.arange(n, dtype=np.uint32)
    rev = ((rev & 0x55555555) << 1) | ((rev & 0xAAAAAAAA) >> 1)
    rev = ((rev & 0x33333333) << 2) | ((rev & 0xCCCCCCCC) >> 2)
    rev = ((rev & 0x0F0F0F0F) << 4) | ((rev & 0xF0F0F0F0) >> 4)
    rev = ((rev & 0x00FF00FF) << 8) | ((rev & 0xFF00FF00) >> 8)
    rev = ((rev << 16) | (rev >> 16)) >> np.uint32(32 - bits)
    return rev.astype(np.intp)


def _tables(n: int, inverse: bool) -> tuple[np.ndarray, list[np.ndarray]]:
    key = (n, inverse)
    table = _TABLES.get(key)
    if table is None:
        with _TABLE_LOCK:
            table = _TABLES.get(key)
            if table is None:
                sign = 2j if inverse else -2j
                stages = []
                m = 2
                while m <= n:
                    stages.append(np.exp(sign * np.pi * np.arange(m // 2) / m))
                    m *= 2
                table = (_bit_reverse_indices(n), stages)
                _TABLES[key] = table
    return table


def fft(x, inverse: bool = False) -> np.ndarray:
    """Radix-2 discrete Fourier transform along the last axis.

    The length of the last axis must be a power of two. The inverse
    transform applies the 1/N scaling, so fft(fft(x), inverse=True)
    round-trips. Leading axes are transformed independently (batched).
    """
    data = np.asarray(x)
    if data.dtype != np.complex128:
        data = data.astype(np.complex128)
    n = data.shape[-1]
    if not is_power_of_two(n):
        raise ValueError(f"transform length must be a power of two, got {n}")
    if n == 1:
        return data.copy()
    rev, stages = _tables(n, inverse)
    y = data[..., rev]  # gather makes the working copy
    m = 2
    for w in stages:
        half = m // 2
        z = y.reshape(y.shape[:-1] + (n // m, m))
        t = z[..., half:] * w
        z[..., half:] = z[..., :half] - t
        z[..., :half] += t
        m *= 2
    if inverse:
        y *= 1.0 / n
    return y


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(
            f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}"
        )


def _real_part(spectrum_product: np.ndarray) -> np.ndarray:
    out = fft(spectrum_product, inverse=True)
    if __debug__:
        residue = float(np.max(np.abs(out.imag), initial=0.0))
        scale = max(1.0, float(np.max(np.abs(out.real), initial=0.0)))
        assert residue <= 1e-6 * scale, (
            f"imaginary residue {residue:.3e} exceeds tolerance for real inputs"
        )
    return np.ascontiguousarray(out.real)


def circular_convolve(a, b) -> HyperVector:
    """Bind two hypervectors: result_l = sum_k a_k * b_((l-k) mod N).

    Computed as an FFT pointwise product, O(N log N). Commutative.
    """
    av = as_hypervector(a, "a")
    bv = as_hypervector(b, "b")
    _check_same_dim(av, bv)
    return _real_part(fft(av) * fft(bv))


def circular_correlate(a, t) -> HyperVector:
    """Unbind: result_i = sum_j a_j * t_((i+j) mod N).

    Returns the noisy value estimate bound to key ``a`` inside trace
    ``t``; the adjoint of binding by ``a``.
    """
    av = as_hypervector(a, "a")
    tv = as_hypervector(t, "t")
    _check_same_dim(av, tv)
    return _real_part(np.conj(fft(av)) * fft(tv))


def superpose(vs) -> HyperVector:
    """Element-wise sum of a nonempty list of same-dimension hypervectors."""
    items = [as_hypervector(v, f"vs[{i}]") for i, v in enumerate(vs)]
    if not items:
        raise ValueError("superpose requires at least one vector")
    n = items[0].size
    for i, v in enumerate(items[1:], start=1):
        if v.size != n:
            raise ValueError(f"dimension mismatch: vs[{i}] has {v.size}, expected {n}")
    return np.sum(items, axis=0)


def _convolve_rows(a_rows: np.ndarray, b_rows: np.ndarray) -> np.ndarray:
    # Row-wise binding of two (M, N) stacks; bit-identical per row to
    # circular_convolve on the individual rows.
    return _real_part(fft(a_rows) * fft(b_rows))


def _correlate_rows(a_rows: np.ndarray, t: np.ndarray) -> np.ndarray:
    # Unbind one trace with a stack of keys, (M, N) -> (M, N).
    return _real_part(np.conj(fft(a_rows)) * fft(t))
