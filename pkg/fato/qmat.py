"""
Dense complex-matrix kernel for 2x2 and 4x4 unitaries.

Matrices are plain numpy arrays of dtype complex128. Single-qubit
exponentials use the closed axis-angle form; Hermitian exponentials of any
size go through an eigendecomposition. Every function is pure.
"""

from typing import Sequence

import numpy as np

from fato.config import TOLERANCES
from fato.exceptions import DimMismatch, NonUnitAxis, NonUnitary, ValidationError
from fato.logger import get_logger

logger = get_logger('qmat')

_PAULIS = {
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'z': np.array([[1, 0], [0, -1]], dtype=complex),
}
ALLOWED_DIMS = (2, 4)


def pauli(axis: str) -> np.ndarray:
    """Return a fresh copy of the Pauli matrix for axis 'x', 'y' or 'z'."""
    key = str(axis).lower()
    if key not in _PAULIS:
        logger.error(f"Unknown Pauli axis: {axis}")
        raise ValidationError(f"Unknown Pauli axis '{axis}', expected one of x, y, z")
    return _PAULIS[key].copy()


def identity(dim: int = 2) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def _check_square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in ALLOWED_DIMS:
        logger.error(f"{name} has unsupported shape {m.shape}")
        raise DimMismatch(f"{name} must be 2x2 or 4x4, got shape {m.shape}")
    return m


def exp_su2(nx: float, ny: float, nz: float, phi: float) -> np.ndarray:
    '''
    Closed-form SU(2) rotation exp(-i phi n.sigma) = cos(phi) I - i sin(phi) n.sigma.

            Parameters:
                    nx, ny, nz (float): Components of the rotation axis, unit norm within 1e-12
                    phi (float): Rotation half-angle in radians
            Returns:
                    u (np.ndarray): 2x2 unitary
    '''
    norm = np.sqrt(nx * nx + ny * ny + nz * nz)
    if abs(norm - 1.0) > TOLERANCES.axis:
        logger.error(f"Rotation axis ({nx}, {ny}, {nz}) has norm {norm}")
        raise NonUnitAxis(f"Rotation axis must have unit norm, got {norm!r}")
    c, s = np.cos(phi), np.sin(phi)
    return np.array([
        [c - 1j * s * nz, -1j * s * nx - s * ny],
        [-1j * s * nx + s * ny, c + 1j * s * nz],
    ], dtype=complex)


def exp_su2_batch(nx, ny, nz, phi) -> np.ndarray:
    """
    Vectorised exp_su2 for broadcastable component arrays, returning shape (..., 2, 2).
    No axis validation; callers build the axes themselves.
    """
    nx, ny, nz, phi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (nx, ny, nz, phi)))
    c, s = np.cos(phi), np.sin(phi)
    out = np.empty(phi.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c - 1j * s * nz
    out[..., 0, 1] = -1j * s * nx - s * ny
    out[..., 1, 0] = -1j * s * nx + s * ny
    out[..., 1, 1] = c + 1j * s * nz
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two 2x2 matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        logger.error(f"kron needs two 2x2 factors, got {a.shape} and {b.shape}")
        raise DimMismatch(f"kron expects 2x2 factors, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def max_entry_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def unitarity_defect(u: np.ndarray) -> float:
    """Max-entry norm of U^dagger U - I."""
    u = np.asarray(u, dtype=complex)
    return max_entry_norm(u.conj().T @ u - np.eye(u.shape[0]))


def is_hermitian(h: np.ndarray, tol: float = TOLERANCES.hermitian) -> bool:
    h = np.asarray(h, dtype=complex)
    return max_entry_norm(h - np.swapaxes(h.conj(), -1, -2)) < tol


def trace_fidelity(u_target: np.ndarray, u_actual: np.ndarray, tol: float = 1e-9) -> float:
    '''
    Global-phase invariant gate overlap |Tr(U_target^dagger U_actual)| / dim.

            Parameters:
                    u_target (np.ndarray): Target unitary
                    u_actual (np.ndarray): Realised unitary of the same dimension
                    tol (float): Allowed unitarity defect of either argument
            Returns:
                    fidelity (float): Value in [0, 1]
    '''
    a = _check_square(u_target, "u_target")
    b = _check_square(u_actual, "u_actual")
    if a.shape != b.shape:
        logger.error(f"Fidelity between {a.shape} and {b.shape} matrices requested")
        raise DimMismatch(f"Dimension mismatch: {a.shape} vs {b.shape}")
    for name, m in (("u_target", a), ("u_actual", b)):
        defect = unitarity_defect(m)
        if defect > tol:
            logger.error(f"{name} is not unitary (defect {defect:.3e})")
            raise NonUnitary(f"{name} is not unitary: defect {defect:.3e}")
    overlap = abs(np.trace(a.conj().T @ b)) / a.shape[0]
    return float(min(1.0, overlap))


def expm_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """
    exp(-i h t) for a Hermitian h by eigendecomposition. Accepts a single
    matrix or a stack of shape (..., d, d).
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        logger.error("expm_hermitian called with a non-Hermitian generator")
        raise ValidationError("Generator must be Hermitian within 1e-10")
    evals, evecs = np.linalg.eigh(h)
    phases = np.exp(-1j * evals * t)
    return (evecs * phases[..., None, :]) @ np.swapaxes(evecs.conj(), -1, -2)


def phase_align(reference: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Multiply m by the unit phase that maximises Re Tr(reference^dagger m)."""
    overlap = np.trace(np.asarray(reference).conj().T @ m)
    if abs(overlap) == 0.0:
        return np.asarray(m, dtype=complex)
    return m * (np.conj(overlap) / abs(overlap))


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry distance between a and b after removing their relative global phase."""
    return max_entry_norm(np.asarray(a) - phase_align(a, np.asarray(b, dtype=complex)))


def ordered_product(stack: Sequence[np.ndarray], dim: int = 2) -> np.ndarray:
    """
    Time-ordered product of a stack of step unitaries, earliest first in the
    stack and rightmost in the result. Reduces pairwise, so rounding error
    grows with the log of the step count.
    """
    m = np.asarray(stack, dtype=complex)
    if m.shape[0] == 0:
        return identity(dim)
    while m.shape[0] > 1:
        leftover = None
        if m.shape[0] % 2:
            leftover = m[-1:]
            m = m[:-1]
        m = m[1::2] @ m[0::2]
        if leftover is not None:
            m = np.concatenate([m, leftover], axis=0)
    return m[0]
