"""Dense complex linear algebra for small matrices.

Everything here operates on plain numpy arrays.  Matrices are small
(4x4 blocks, or a few hundred rows for truncated lattice generators),
so simplicity and certifiable accuracy win over asymptotic speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ShapeError",
    "PreconditionError",
    "HermitianEigenDecomposition",
    "kron",
    "vec",
    "unvec",
    "hermitian_eig",
    "expm",
    "expm_apply",
]


class ShapeError(ValueError):
    """Raised on dimension mismatches."""


class PreconditionError(ValueError):
    """Raised when an operation's input contract is violated."""


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, (i,j) block of the result is a[i,j]*b."""
    return np.kron(np.asarray(a), np.asarray(b))


def vec(a: np.ndarray) -> np.ndarray:
    """Row-stacking vectorization: vec([[a,b],[c,d]]) = (a, b, c, d).

    Satisfies vec(A X B^T) = kron(A, B) vec(X).
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ShapeError(f"vec expects a matrix, got ndim={a.ndim}")
    return a.reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if v.size != rows * cols:
        raise ShapeError(f"cannot reshape length-{v.size} vector to {rows}x{cols}")
    return v.reshape(rows, cols)


@dataclass(frozen=True)
class HermitianEigenDecomposition:
    """Unitary eigendecomposition h = basis @ diag(eigenvalues) @ basis*.

    Eigenvalues are sorted in descending order; each eigenvector's first
    nonzero component is phase-normalized to positive real so repeated runs
    are bit-identical.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray


def _jacobi_sweeps(a: np.ndarray, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations on a Hermitian matrix.

    Returns (eigenvalues, basis) with a = basis @ diag(w) @ basis*.
    """
    n = a.shape[0]
    a = a.astype(complex).copy()
    basis = np.eye(n, dtype=complex)
    scale = max(np.abs(a).max(), 1.0)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= 1e-15 * scale * n:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                # Phase factor turns the pivot real, then a real rotation
                # annihilates it.
                phase = apq / abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau >= 0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # Local unitary in the (p, q) plane: columns are the
                # rotated basis vectors.
                v_pp, v_pq = c, s * phase
                v_qp, v_qq = -s * np.conj(phase), c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * v_pp + col_q * v_qp
                a[:, q] = col_p * v_pq + col_q * v_qq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(v_pp) * row_p + np.conj(v_qp) * row_q
                a[q, :] = np.conj(v_pq) * row_p + np.conj(v_qq) * row_q
                b_p = basis[:, p].copy()
                b_q = basis[:, q].copy()
                basis[:, p] = b_p * v_pp + b_q * v_qp
                basis[:, q] = b_p * v_pq + b_q * v_qq
    # Clean the tiny imaginary residue on the diagonal.
    return np.diag(a).real.copy(), basis


def hermitian_eig(h: np.ndarray, tol: float = 1e-10) -> HermitianEigenDecomposition:
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.

    Raises :class:`PreconditionError` if the input deviates from Hermitian
    by more than ``tol`` in max-entry norm.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {h.shape}")
    dev = np.abs(h - h.conj().T).max()
    if dev > tol:
        raise PreconditionError(
            f"matrix is not Hermitian: max |h - h*| = {dev:.3e} exceeds {tol:.1e}"
        )
    w, basis = _jacobi_sweeps((h + h.conj().T) / 2.0)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    basis = basis[:, order]
    # Deterministic phases: first nonzero component positive real.
    for k in range(basis.shape[1]):
        col = basis[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
        lead = col[idx[0]]
        basis[:, k] = col * (np.conj(lead) / abs(lead))
    return HermitianEigenDecomposition(basis=basis, eigenvalues=w)


def expm(a: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Matrix exponential e^{t a} by scaling-and-squaring a Taylor series.

    The scaled norm is brought below 1/2 before summing; the series is
    truncated once terms fall below 1e-16 relative, which certifies the
    result at the matrix sizes used here.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    m = a * t
    norm = np.linalg.norm(m, 1)
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
        m = m / (2.0 ** squarings)
    result = np.eye(n, dtype=m.dtype)
    term = np.eye(n, dtype=m.dtype)
    for k in range(1, 40):
        term = term @ m / k
        result = result + term
        if np.abs(term).max() <= 1e-17:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def expm_apply(a: np.ndarray, t: float, v: np.ndarray) -> np.ndarray:
    """Compute e^{t a} v with matrix-vector products only.

    Splits t into substeps of scaled norm <= 1/2 and applies a truncated
    Taylor series per substep; much cheaper than a full :func:`expm` when
    only one column of the propagator is needed.
    """
    a = np.asarray(a)
    v = np.asarray(v).astype(np.result_type(a.dtype, v.dtype, float))
    m = a * t
    norm = np.linalg.norm(m, 1)
    steps = max(1, int(np.ceil(norm / 0.5)))
    h = m / steps
    for _ in range(steps):
        term = v
        acc = v.copy()
        for k in range(1, 40):
            term = h @ term / k
            acc = acc + term
            if np.abs(term).max() <= 1e-17 * max(1.0, np.abs(acc).max()):
                break
        v = acc
    return v
