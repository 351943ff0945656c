"""Dense complex linear algebra for 2-4 dimensional Hilbert spaces.

Basis conventions used everywhere in the package:

* single atom: ``(|g>, |r>)``
* atom pair, full: ``(|gg>, |gr>, |rg>, |rr>)``, first factor is atom 1
* atom pair, symmetric: ``(|gg>, |s>, |rr>)`` with ``|s> = (|gr> + |rg>)/sqrt(2)``

``sigma_z |g> = +|g>``, so ``|g>`` is the north pole of the Bloch sphere.
"""
from __future__ import annotations

import numpy as np

from .errors import ContractViolation, DimensionError

HERM_TOL = 1e-10
TRACE_TOL = 1e-8
EIG_CLIP = 1e-8

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# |r><r| and |g><r| in the (g, r) basis
SIGMA_RR = np.array([[0, 0], [0, 1]], dtype=complex)
SIGMA_GR = np.array([[0, 1], [0, 0]], dtype=complex)


def kron(a, b) -> np.ndarray:
    """4x4 Kronecker product of two 2x2 operators (``a`` acts on atom 1)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DimensionError(f"kron expects two 2x2 operators, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def is_hermitian(h, tol: float = HERM_TOL) -> bool:
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and np.allclose(h, h.conj().T, rtol=0, atol=tol)


def hermitian_eigensystem(h):
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian matrix.

    Each eigenvector is rotated so that its largest-magnitude component is real
    and positive, which makes the output deterministic.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise ContractViolation("matrix is not Hermitian")
    if h.shape[0] not in (2, 3, 4):
        raise DimensionError(f"unsupported dimension {h.shape[0]}")
    w, v = np.linalg.eigh(h)
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    v = v * (np.abs(lead) / lead)[None, :]
    return w, v


def check_density_matrix(rho, dims=(2, 4)) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in dims:
        raise DimensionError(f"density matrix must be square with dim in {dims}, got {rho.shape}")
    if not is_hermitian(rho):
        raise ContractViolation("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL:
        raise ContractViolation(f"density matrix trace {np.trace(rho).real!r} != 1")
    if np.linalg.eigvalsh(rho)[0] < -EIG_CLIP:
        raise ContractViolation("density matrix has a negative eigenvalue")
    return rho


def partial_trace(rho, keep: str = "first") -> np.ndarray:
    """Reduced 2x2 state of one atom from a 4x4 two-atom operator."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise DimensionError(f"partial_trace needs a 4x4 operator, got {rho.shape}")
    r = rho.reshape(2, 2, 2, 2)
    if keep == "first":
        return np.einsum("ajbj->ab", r)
    if keep == "second":
        return np.einsum("jajb->ab", r)
    raise ValueError(f"keep must be 'first' or 'second', not {keep!r}")


def entropy_from_eigenvalues(lam) -> float:
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < -EIG_CLIP):
        raise ContractViolation(f"negative eigenvalue {lam.min():.3e}")
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits; eigenvalues in [-1e-8, 0) count as zero."""
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise ContractViolation("density matrix is not Hermitian")
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho))


def binary_entropy(p):
    """Elementwise ``-p log2 p - (1-p) log2(1-p)`` with ``0 log 0 = 0``."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        q = 1.0 - p
        b = np.where(q > 0, -q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return a + b


def qubit_entropy_from_bloch(r):
    """Entropy (bits) of qubit states with Bloch-vector length ``r`` (vectorised)."""
    r = np.clip(np.asarray(r, dtype=float), 0.0, 1.0)
    return binary_entropy((1.0 + r) / 2.0)


def ket_to_dm(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def clip_to_physical(rho) -> np.ndarray:
    """Zero out slightly negative eigenvalues (integrator round-off) and renormalise."""
    rho = 0.5 * (np.asarray(rho) + np.asarray(rho).conj().T)
    w, v = np.linalg.eigh(rho)
    if w[0] >= 0:
        return rho
    w = np.clip(w, 0.0, None)
    rho = (v * w) @ v.conj().T
    return rho / np.trace(rho).real
