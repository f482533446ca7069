"""Symmetric eigendecomposition and Laplacian spectral quantities."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph_core import Graph

__all__ = [
    "Spectrum",
    "LaplacianReport",
    "ConvergenceError",
    "laplacian",
    "sym_eig",
    "laplacian_report",
    "ring_spectrum_closed_form",
    "eigenvalue_clusters",
    "average_first_basis",
]

OFF_TOL = 1e-12
MAX_SWEEPS = 100
MULTIPLICITY_TOL = 1e-7
SYMMETRY_TOL = 1e-12


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues; column ``j`` of ``eigenvectors`` pairs with ``eigenvalues[j]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def to_json_obj(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "eigenvectors": self.eigenvectors.tolist(),
        }


@dataclass(frozen=True, eq=False)
class LaplacianReport:
    spectrum: Spectrum
    algebraic_connectivity: float
    spectral_radius: float
    fiedler: np.ndarray
    anderson_bound: float
    grone_bound: float

    def to_json_obj(self) -> dict:
        obj = self.spectrum.to_json_obj()
        obj.update(
            algebraic_connectivity=self.algebraic_connectivity,
            spectral_radius=self.spectral_radius,
            fiedler=self.fiedler.tolist(),
            anderson_bound=self.anderson_bound,
            grone_bound=self.grone_bound,
        )
        return obj


def laplacian(g: Graph) -> np.ndarray:
    w = g.weights
    return np.diag(w.sum(axis=1)) - w


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Disjoint (p, q) pairs per round; every pair appears once per sweep."""
    m = n + (n % 2)
    idx = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = idx[k], idx[m - 1 - k]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return tuple(rounds)


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    # stacked so one column rotation updates both the matrix and the eigenvectors
    work = np.vstack([a, np.eye(n)])
    mat = work[:n]
    scale = np.linalg.norm(mat)
    rounds = _round_robin(n)
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(mat - np.diag(np.diag(mat)))
        if off <= OFF_TOL * scale:
            return np.diag(mat).copy(), work[n:].copy()
        for p, q in rounds:
            apq = mat[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            # tiny apq overflows tau to inf, which correctly yields t = 0
            with np.errstate(over="ignore", divide="ignore"):
                tau = (mat[q, q] - mat[p, p]) / (2.0 * apq)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cp, cq = work[:, p], work[:, q]
            work[:, p] = c * cp - s * cq
            work[:, q] = s * cp + c * cq
            rp, rq = mat[p, :], mat[q, :]
            c, s = c[:, None], s[:, None]
            mat[p, :] = c * rp - s * rq
            mat[q, :] = s * rp + c * rq
    off = np.linalg.norm(mat - np.diag(np.diag(mat)))
    raise ConvergenceError(
        f"Jacobi did not converge in {MAX_SWEEPS} sweeps: n={n}, "
        f"off-diagonal norm {off:.3e}, |A|_F {scale:.3e}, "
        f"cond estimate {np.linalg.cond(a):.3e}"
    )


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude entry positive; argmax picks the lowest index on ties
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def sym_eig(a, method: str = "jacobi") -> Spectrum:
    """Eigendecomposition of a real symmetric matrix.

    ``method="jacobi"`` runs cyclic Jacobi rotations in round-robin order;
    ``method="lapack"`` defers to ``numpy.linalg.eigh``. Both return ascending
    eigenvalues and sign-normalized eigenvectors.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if a.size and np.max(np.abs(a - a.T)) > SYMMETRY_TOL:
        raise ValueError("matrix is not symmetric")
    a = (a + a.T) / 2.0
    n = a.shape[0]
    if n == 1:
        return Spectrum(a[0].copy(), np.ones((1, 1)))
    if method == "jacobi":
        vals, vecs = _jacobi(a)
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(vals, kind="stable")
    return Spectrum(vals[order], _fix_signs(vecs[:, order]))


def eigenvalue_clusters(values: np.ndarray, tol: float = MULTIPLICITY_TOL) -> list[np.ndarray]:
    """Group ascending eigenvalues into index blocks of (numerically) equal value."""
    values = np.asarray(values)
    if values.size == 0:
        return []
    thresh = tol * max(1.0, float(np.max(np.abs(values))))
    blocks, start = [], 0
    for k in range(1, values.size + 1):
        if k == values.size or values[k] - values[k - 1] > thresh:
            blocks.append(np.arange(start, k))
            start = k
    return blocks


def average_first_basis(spectrum: Spectrum) -> np.ndarray:
    """Laplacian eigenvectors with column 0 replaced by the normalized all-ones vector.

    The remaining vectors of the null space are re-orthogonalized against it,
    which matters when the graph is disconnected and the zero eigenvalue is
    repeated.
    """
    vecs = np.array(spectrum.eigenvectors)
    n = vecs.shape[0]
    ones = np.ones(n) / np.sqrt(n)
    block = eigenvalue_clusters(spectrum.eigenvalues)[0]
    k = block.size
    if k == 1:
        vecs[:, 0] = ones
        return vecs
    stacked = np.column_stack([ones, vecs[:, block]])
    q, _ = np.linalg.qr(stacked)
    q = q[:, :k]
    q[:, 0] = ones
    vecs[:, block] = _fix_signs_tail(q)
    return vecs


def _fix_signs_tail(q: np.ndarray) -> np.ndarray:
    out = np.array(q)
    out[:, 1:] = _fix_signs(q[:, 1:])
    return out


def laplacian_report(g: Graph, method: str = "jacobi") -> LaplacianReport:
    eig = sym_eig(laplacian(g), method=method)
    vals = eig.eigenvalues
    degrees = g.weights.sum(axis=1)
    iu, ju = np.nonzero(np.triu(g.weights, 1) > 0)
    anderson = float(np.max(degrees[iu] + degrees[ju])) if iu.size else 0.0
    n = g.n
    return LaplacianReport(
        spectrum=eig,
        algebraic_connectivity=float(vals[1]) if n > 1 else 0.0,
        spectral_radius=float(vals[-1]),
        fiedler=eig.eigenvectors[:, 1].copy() if n > 1 else np.zeros(1),
        anderson_bound=anderson,
        grone_bound=float(degrees.max()) + 1.0,
    )


def ring_spectrum_closed_form(n: int) -> np.ndarray:
    """Ring Laplacian eigenvalues 2 - 2cos(2*pi*k/n), k = 0, 1, 1, 2, 2, ..."""
    if n < 3:
        raise ValueError("ring needs n >= 3")
    ks = [0] + [(j + 1) // 2 for j in range(1, n)]
    vals = 2.0 - 2.0 * np.cos(2.0 * np.pi * np.array(ks) / n)
    return np.sort(vals)
