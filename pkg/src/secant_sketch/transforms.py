"""Orthonormal transform kernels and their dense reference versions.

Three transforms are supported, all normalized so that the implied matrix is
unitary:

* ``HADAMARD``: Walsh-Hadamard in natural (Sylvester) order, power-of-two
  lengths only. Entry ``(j, k)`` is ``(-1)**popcount(j & k) / sqrt(n)``.
* ``DCT2``: type-II cosine transform, entry
  ``c_j * cos(pi * (2k + 1) * j / (2n))`` with ``c_0 = sqrt(1/n)`` and
  ``c_j = sqrt(2/n)`` otherwise.
* ``COMPLEX_DFT``: entry ``exp(-2 pi i j k / n) / sqrt(n)``; outputs are
  complex and their norm is the norm of the stacked real and imaginary parts.

Fast kernels act along the last axis, so a ``(batch, n)`` array transforms
each row independently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import DimensionMismatch, InvalidLength, ParameterError


class TransformKind(str, enum.Enum):
    HADAMARD = "hadamard"
    DCT2 = "dct2"
    COMPLEX_DFT = "dft"

    @classmethod
    def parse(cls, value: "TransformKind | str") -> "TransformKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise ParameterError(f"unknown transform {value!r}; expected one of {names}") from None

    @property
    def is_complex(self) -> bool:
        return self is TransformKind.COMPLEX_DFT


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _check_length(kind: TransformKind, n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidLength(f"transform length must be a positive integer, got {n!r}")
    n = int(n)
    if kind is TransformKind.HADAMARD and not is_power_of_two(n):
        raise InvalidLength(f"Hadamard transform needs a power-of-two length, got {n}")
    return n


@dataclass(frozen=True)
class TransformPlan:
    """Immutable, reusable description of an orthonormal transform of fixed length."""

    kind: TransformKind
    length: int
    workers: int = 1

    def apply(self, x: np.ndarray) -> np.ndarray:
        return apply(self, x)

    def inverse(self, y: np.ndarray) -> np.ndarray:
        return inverse(self, y)


def plan(kind: TransformKind | str, n: int, workers: int = 1) -> TransformPlan:
    """Validate ``(kind, n)`` and return a plan.

    Raises:
        InvalidLength: ``n`` is not positive, or not a power of two for Hadamard.
    """
    kind = TransformKind.parse(kind)
    return TransformPlan(kind, _check_length(kind, n), max(1, int(workers)))


def _as_input(x, n: int) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim == 0 or arr.shape[-1] != n:
        got = "scalar" if arr.ndim == 0 else arr.shape[-1]
        raise DimensionMismatch(f"expected last axis of length {n}, got {got}")
    if not np.iscomplexobj(arr):
        arr = arr.astype(np.float64, copy=False)
    return arr


def fwht(x: np.ndarray) -> np.ndarray:
    """Orthonormal fast Walsh-Hadamard transform along the last axis.

    Iterative radix-2 butterflies on a private working copy; the caller's
    array is never modified.
    """
    work = np.array(x, dtype=np.result_type(x, np.float64), copy=True)
    n = work.shape[-1]
    if not is_power_of_two(n):
        raise InvalidLength(f"Hadamard transform needs a power-of-two length, got {n}")
    lead = work.shape[:-1]
    h = 1
    while h < n:
        view = work.reshape(*lead, n // (2 * h), 2, h)
        top = view[..., 0, :].copy()
        bottom = view[..., 1, :]
        view[..., 0, :] += bottom
        np.subtract(top, bottom, out=bottom)
        h *= 2
    work /= np.sqrt(n)
    return work


def apply(p: TransformPlan, x) -> np.ndarray:
    """Return ``U x`` for the plan's orthonormal matrix ``U`` (last axis)."""
    arr = _as_input(x, p.length)
    if p.kind is TransformKind.HADAMARD:
        return fwht(arr)
    if p.kind is TransformKind.DCT2:
        if np.iscomplexobj(arr):
            return apply(p, arr.real) + 1j * apply(p, arr.imag)
        return scipy.fft.dct(arr, type=2, norm="ortho", axis=-1, workers=p.workers)
    return scipy.fft.fft(arr, norm="ortho", axis=-1, workers=p.workers)


def inverse(p: TransformPlan, y) -> np.ndarray:
    """Return ``U* y``, undoing :func:`apply`."""
    arr = _as_input(y, p.length)
    if p.kind is TransformKind.HADAMARD:
        return fwht(arr)
    if p.kind is TransformKind.DCT2:
        if np.iscomplexobj(arr):
            return inverse(p, arr.real) + 1j * inverse(p, arr.imag)
        return scipy.fft.idct(arr, type=2, norm="ortho", axis=-1, workers=p.workers)
    return scipy.fft.ifft(arr, norm="ortho", axis=-1, workers=p.workers)


def dense_matrix(kind: TransformKind | str, n: int) -> np.ndarray:
    """Build the ``n x n`` transform matrix entry by entry from its closed form."""
    kind = TransformKind.parse(kind)
    n = _check_length(kind, n)
    j = np.arange(n).reshape(-1, 1)
    k = np.arange(n).reshape(1, -1)
    if kind is TransformKind.HADAMARD:
        parity = np.vectorize(lambda v: bin(int(v)).count("1") & 1)(j & k)
        return np.where(parity == 0, 1.0, -1.0) / np.sqrt(n)
    if kind is TransformKind.DCT2:
        scale = np.where(j == 0, np.sqrt(1.0 / n), np.sqrt(2.0 / n))
        return scale * np.cos(np.pi * (2 * k + 1) * j / (2 * n))
    return np.exp(-2j * np.pi * (j * k % n) / n) / np.sqrt(n)


def apply_naive(kind: TransformKind | str, x) -> np.ndarray:
    """O(n^2) reference evaluation using :func:`dense_matrix`."""
    kind = TransformKind.parse(kind)
    arr = np.asarray(x)
    if arr.ndim == 0:
        raise DimensionMismatch("expected a vector, got a scalar")
    u = dense_matrix(kind, arr.shape[-1])
    return arr @ u.T


def bos_constant(p: TransformPlan) -> float:
    """Return ``sqrt(n) * max |u_ij|`` measured from columns ``U e_j``."""
    columns = apply(p, np.eye(p.length))
    return float(np.sqrt(p.length) * np.max(np.abs(columns)))


# Model flop constant per element per log2 stage.
FLOP_CONSTANT = {
    TransformKind.HADAMARD: 5,
    TransformKind.DCT2: 5,
    TransformKind.COMPLEX_DFT: 10,
}


def transform_flops(kind: TransformKind | str, n: int) -> float:
    """Model cost ``c_t * n * log2(n)`` of one fast transform."""
    kind = TransformKind.parse(kind)
    return FLOP_CONSTANT[kind] * n * np.log2(n) if n > 1 else 0.0
