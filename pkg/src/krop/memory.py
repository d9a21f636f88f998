"""Mutable vector-symbolic key-value memory over a superposition trace.

A store binds key rows to value rows by circular convolution and keeps
their running sum as a single trace hypervector. Reads unbind the key by
circular correlation and clean the noisy estimate with the store's
strategy. Overwrites first re-read and clean the key's current value,
subtract that binding, then add the new one; a purely symbolic reference
map tracks ground truth so retrieval can be graded at any point.

The trace is kept at full precision and never renormalized. A store has
a single writer; reads are pure and safe to interleave between writes.
"""

from __future__ import annotations

import math

import numpy as np

from .cleanup import (
    CleanupResult,
    _transform_rows,
    direct_cleanup,
    krop_cleanup,
    sign_cleanup,
)
from .codebook import ExplicitCodebook, KropParams, krop_materialize, krop_row
from .hrr import _correlate_rows, circular_convolve, circular_correlate

STRATEGIES = ("krop", "sign", "none", "direct")


class ReferenceMemory:
    """Symbolic ground truth: the most recent value index written per key index."""

    def __init__(self) -> None:
        self.mapping: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.mapping)

    def __contains__(self, key_index: int) -> bool:
        return key_index in self.mapping

    def __getitem__(self, key_index: int) -> int:
        return self.mapping[key_index]

    def items(self):
        return self.mapping.items()


class AssociativeStore:
    """Key-value memory: explicit key codebook, explicit or implicit values.

    ``values`` is a KropParams (implicit codebook of all 2^K rows) for
    the krop strategy, or an ExplicitCodebook otherwise. Strategies:

    - krop:   butterfly clean-up, returns exact codebook rows
    - direct: dense dot-product clean-up, returns exact codebook rows
    - sign:   rounds reads onto +-1/sqrt(N)
    - none:   reads return the raw noisy estimate
    """

    def __init__(
        self,
        key_codebook: ExplicitCodebook,
        values: KropParams | ExplicitCodebook,
        strategy: str,
    ) -> None:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
        if strategy == "krop" and not isinstance(values, KropParams):
            raise ValueError("krop strategy requires implicit KropParams values")
        if strategy in ("direct", "sign") and not isinstance(values, ExplicitCodebook):
            raise ValueError(f"{strategy} strategy requires an explicit value codebook")
        dim = values.N if isinstance(values, KropParams) else values.dim
        if key_codebook.dim != dim:
            raise ValueError(
                f"dimension mismatch: keys have {key_codebook.dim}, values have {dim}"
            )
        self.keys = key_codebook
        self.values = values
        self.strategy = strategy
        self.trace = np.zeros(dim, dtype=np.float64)
        self.reference = ReferenceMemory()

    @property
    def dim(self) -> int:
        return int(self.trace.size)

    @property
    def num_values(self) -> int:
        if isinstance(self.values, KropParams):
            return self.values.N
        return self.values.count

    def key_row(self, key_index: int) -> np.ndarray:
        return self.keys.row(key_index)

    def value_row(self, value_index: int) -> np.ndarray:
        if isinstance(self.values, KropParams):
            if not 0 <= value_index < self.values.N:
                raise IndexError(
                    f"value index {value_index} out of range [0, {self.values.N})"
                )
            return krop_row(self.values, value_index)
        return self.values.row(value_index)

    def write(self, key_index: int, value_index: int) -> None:
        """Bind key to value and add the pair to the trace."""
        key = self.key_row(key_index)
        value = self.value_row(value_index)
        self.trace = self.trace + circular_convolve(key, value)
        self.reference.mapping[key_index] = value_index

    def read(self, key_index: int) -> CleanupResult:
        """Unbind the key from the trace and clean the estimate per strategy."""
        key = self.key_row(key_index)
        noisy = circular_correlate(key, self.trace)
        if self.strategy == "krop":
            return krop_cleanup(self.values, noisy)
        if self.strategy == "direct":
            return direct_cleanup(self.values, noisy)
        if self.strategy == "sign":
            return sign_cleanup(noisy)
        return CleanupResult(index=None, vector=noisy, scores=None)

    def overwrite(self, key_index: int, new_value_index: int) -> None:
        """Replace the key's association: erase the cleaned old value, add the new.

        The erase step subtracts the binding of the key with whatever the
        strategy's clean-up recovered; only an exact recovery cancels the
        old term exactly.
        """
        if key_index not in self.reference:
            raise KeyError(f"key index {key_index} has no stored association")
        key = self.key_row(key_index)
        old = self.read(key_index).vector
        new = self.value_row(new_value_index)
        self.trace = (
            self.trace - circular_convolve(key, old) + circular_convolve(key, new)
        )
        self.reference.mapping[key_index] = new_value_index


def _value_matrix(store: AssociativeStore) -> np.ndarray:
    # Full value codebook as rows, materializing the implicit one on demand.
    if isinstance(store.values, KropParams):
        return krop_materialize(store.values).rows
    return store.values.rows


def _graded_indices(
    store: AssociativeStore, cleaned_idx: np.ndarray, ref_idx: np.ndarray
) -> np.ndarray:
    # Index match, with an exact-row fallback for sampled codebooks that
    # may contain duplicate rows (the lower index wins the argmax there).
    correct = cleaned_idx == ref_idx
    if not np.all(correct) and isinstance(store.values, ExplicitCodebook):
        miss = ~correct
        rows = store.values.rows
        correct[miss] = np.all(rows[cleaned_idx[miss]] == rows[ref_idx[miss]], axis=1)
    return correct


def retrieval_rate(
    store: AssociativeStore, reference: ReferenceMemory | None = None
) -> float:
    """Fraction of stored associations whose read matches the reference.

    Grading by strategy: krop/direct compare the cleaned row index; sign
    requires the cleaned vector to equal the stored row exactly; none
    grades the raw estimate by dense scoring against all value rows.
    Reads are batched over keys; per-key results match ``store.read``.
    """
    if reference is None:
        reference = store.reference
    if len(reference) == 0:
        raise ValueError("reference memory is empty")
    key_idx = sorted(reference.mapping)
    ref_idx = np.array([reference.mapping[k] for k in key_idx], dtype=np.intp)
    keys = store.keys.rows[key_idx]
    noisy = _correlate_rows(keys, store.trace)

    if store.strategy == "krop":
        scores = _transform_rows(store.values, noisy)
        cleaned = np.argmax(scores, axis=1)
        correct = cleaned == ref_idx
    elif store.strategy == "direct":
        scores = noisy @ store.values.rows.T
        cleaned = np.argmax(scores, axis=1).astype(np.intp)
        correct = _graded_indices(store, cleaned, ref_idx)
    elif store.strategy == "sign":
        scale = 1.0 / math.sqrt(store.dim)
        cleaned_rows = np.where(noisy >= 0.0, scale, -scale)
        stored_rows = store.values.rows[ref_idx]
        correct = np.all(cleaned_rows == stored_rows, axis=1)
    else:  # none: grade the raw estimate against every value row
        rows = _value_matrix(store)
        scores = noisy @ rows.T
        cleaned = np.argmax(scores, axis=1).astype(np.intp)
        correct = cleaned == ref_idx
        if not np.all(correct) and isinstance(store.values, ExplicitCodebook):
            miss = ~correct
            correct[miss] = np.all(rows[cleaned[miss]] == rows[ref_idx[miss]], axis=1)
    return float(np.mean(correct))
