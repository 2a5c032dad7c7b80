"""Cyclic Jacobi eigensolver for dense symmetric matrices."""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import NumericError


@njit(cache=True)
def _jacobi(a, vt, tol, max_sweeps):
    m = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(m):
            for q in range(p + 1, m):
                off += a[p, q] * a[p, q]
        if np.sqrt(2.0 * off) <= tol:
            return sweep
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                app = a[p, p]
                aqq = a[q, q]
                for r in range(m):
                    arp = a[p, r]
                    arq = a[q, r]
                    nrp = c * arp - s * arq
                    nrq = s * arp + c * arq
                    a[p, r] = nrp
                    a[q, r] = nrq
                    a[r, p] = nrp
                    a[r, q] = nrq
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                # vt holds eigenvectors as rows
                for r in range(m):
                    vp = vt[p, r]
                    vq = vt[q, r]
                    vt[p, r] = c * vp - s * vq
                    vt[q, r] = s * vp + c * vq
    return -1


def jacobi_eigh(matrix, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a symmetric matrix.

    Sweeps stop once the off-diagonal Frobenius norm is at most ``tol`` times
    the Frobenius norm of the input. Returns ``(eigenvalues, eigenvectors)``
    sorted by descending eigenvalue; eigenvectors are columns with the sign
    fixed so the largest-magnitude entry is positive.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    a = 0.5 * (a + a.T)
    m = a.shape[0]
    scale = np.linalg.norm(a)
    v = np.eye(m)
    if m == 0 or scale == 0.0:
        return np.zeros(m), v
    sweeps = _jacobi(a, v, tol * scale, max_sweeps)
    v = v.T
    if sweeps < 0:
        raise NumericError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    pivot = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivot, np.arange(m)])
    signs[signs == 0] = 1.0
    return w, v * signs
