"""Dense complex linear algebra helpers.

Matrices and state vectors are plain ``numpy`` complex128 arrays; the
functions here add the dimension checks and the few contractions the rest
of the package needs.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError

ALGEBRA_TOL = 1e-12
PHYSICS_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def matrix(entries) -> np.ndarray:
    """Return ``entries`` as a read-only 2-d complex array."""
    out = np.array(entries, dtype=complex)
    if out.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {out.shape}")
    out.setflags(write=False)
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_all(ops) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def adjoint(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def is_hermitian(a: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    return a.shape[0] == a.shape[1] and bool(np.max(np.abs(a - adjoint(a))) <= tol)


def is_involution(a: np.ndarray, tol: float = ALGEBRA_TOL) -> bool:
    """True for a Hermitian operator squaring to the identity."""
    eye = np.eye(a.shape[0])
    return is_hermitian(a, tol) and bool(np.max(np.abs(a @ a - eye)) <= tol)


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    """Tr(a @ b) without forming the product."""
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionError(f"trace_product needs equal square shapes, got {a.shape} and {b.shape}")
    return complex(np.sum(a * b.T))


def apply(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    if m.shape[1] != v.shape[0]:
        raise DimensionError(f"cannot apply {m.shape} matrix to vector of length {v.shape[0]}")
    return m @ v


def norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def state_vector(amplitudes, tol: float = ALGEBRA_TOL) -> np.ndarray:
    """Validate and return a unit-norm complex vector."""
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if abs(norm(v) - 1.0) > tol:
        raise ValueError(f"state vector has norm {norm(v)!r}, expected 1")
    return v


def apply_local(op: np.ndarray, tensor: np.ndarray, axis: int) -> np.ndarray:
    """Apply ``op`` to one axis of a multi-party state tensor.

    ``tensor`` has one axis per subsystem; the result has the same layout.
    """
    if op.shape[1] != tensor.shape[axis]:
        raise DimensionError(
            f"operator of shape {op.shape} does not act on axis {axis} of dimension {tensor.shape[axis]}"
        )
    moved = np.tensordot(op, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)
