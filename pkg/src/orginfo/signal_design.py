"""Optimal public signals, disclosure thresholds and the plus-one policy."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph_core import Graph, make_special
from .org_model import ModelError, OrgModel, Prior, payoff_matrix
from .spectral import Spectrum, average_first_basis, laplacian, sym_eig

__all__ = [
    "SignalDesign",
    "DisclosurePhase",
    "DISCLOSE_TOL",
    "optimal_signal",
    "uniform_synergy_signal",
    "uniform_synergy_omegas",
    "disclosure_threshold",
    "phase_diagram",
    "posterior_covariance",
    "disclosure_covariance",
    "informativeness",
    "design_gain",
    "plus_one_covariance",
    "plus_one_gain",
    "plus_one_gains",
    "plus_one_best_target",
    "rho_invariance_check",
    "projector",
    "projection_distance",
]

# omega >= -DISCLOSE_TOL counts as nonnegative
DISCLOSE_TOL = 1e-9
THRESHOLD_MERGE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SignalDesign:
    """Disclosed linear statistics of the state.

    Column ``k`` of ``weights`` is the x-space direction of statistic ``k``;
    rescaling a column does not change what the agents learn. ``omegas`` is
    indexed by source direction: eigenvectors of V (or of the whitened
    payoff matrix when ``whitened``), or Laplacian eigenvectors for the
    uniform-synergy construction.
    """

    weights: np.ndarray
    omegas: np.ndarray
    disclosed_indices: np.ndarray
    whitened: bool = False

    @property
    def dimension(self) -> int:
        return int(self.weights.shape[1])

    @property
    def includes_average(self) -> bool:
        n = self.weights.shape[0]
        ones = np.ones(n) / math.sqrt(n)
        resid = ones - projector(self.weights) @ ones
        return bool(np.max(np.abs(resid)) <= 1e-8)

    def is_orthonormal(self, tol: float = 1e-8) -> bool:
        w = self.weights
        return bool(np.max(np.abs(w.T @ w - np.eye(w.shape[1]))) <= tol)


@dataclass(frozen=True)
class DisclosurePhase:
    """Range of beta sharing one disclosure set.

    The range is ``(beta_lo, beta_hi]``, closed at 0 for the first phase and
    unbounded above for the last one (``beta_hi == inf``).
    """

    beta_lo: float
    beta_hi: float
    dimension: int
    disclosed_eigenvalue_classes: tuple[float, ...]


def projector(weights: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the column span of ``weights``."""
    q, r = np.linalg.qr(np.asarray(weights, dtype=float))
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-10 * max(1.0, np.abs(r).max())))
    if rank < weights.shape[1]:
        u, s, _ = np.linalg.svd(weights, full_matrices=False)
        q = u[:, s > 1e-10 * s.max()]
    return q @ q.T


def projection_distance(w1: np.ndarray, w2: np.ndarray) -> float:
    """Spectral-norm distance between the projectors onto two column spans."""
    return float(np.linalg.norm(projector(w1) - projector(w2), ord=2))


def _normalize_columns(w: np.ndarray) -> np.ndarray:
    return w / np.linalg.norm(w, axis=0)


def _psd_sqrt(sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    eig = sym_eig(sigma, method="lapack")
    vals = eig.eigenvalues
    if vals.min() <= 1e-10:
        raise ModelError(f"covariance is not positive definite (min eigenvalue {vals.min():.3e})")
    q = eig.eigenvectors
    root = (q * np.sqrt(vals)) @ q.T
    inv_root = (q / np.sqrt(vals)) @ q.T
    return (root + root.T) / 2.0, (inv_root + inv_root.T) / 2.0


def optimal_signal(model: OrgModel) -> SignalDesign:
    """Disclose the eigen-directions of the (whitened) payoff matrix with nonnegative eigenvalue."""
    v = payoff_matrix(model).v
    if model.prior.rho == 0.0:
        eig = sym_eig(v)
        keep = np.nonzero(eig.eigenvalues >= -DISCLOSE_TOL)[0]
        return SignalDesign(
            weights=eig.eigenvectors[:, keep],
            omegas=eig.eigenvalues,
            disclosed_indices=keep,
        )
    root, inv_root = _psd_sqrt(model.prior_covariance())
    eig = sym_eig(root @ v @ root)
    keep = np.nonzero(eig.eigenvalues >= -DISCLOSE_TOL)[0]
    return SignalDesign(
        weights=_normalize_columns(inv_root @ eig.eigenvectors[:, keep]),
        omegas=eig.eigenvalues,
        disclosed_indices=keep,
        whitened=True,
    )


def uniform_synergy_omegas(eigenvalues: np.ndarray, n: int, beta: float, beta_tilde: float | None = None) -> np.ndarray:
    """V's eigenvalues on the Laplacian eigenvectors when the synergy graph is complete.

    Entry 0 belongs to the all-ones direction and is always 1.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    bt = beta if beta_tilde is None else beta_tilde
    omegas = (1.0 - 2.0 * bt * n + 2.0 * beta * lam) / (1.0 + beta * lam) ** 2
    omegas[0] = 1.0
    return omegas


def uniform_synergy_signal(
    g: Graph,
    beta: float,
    beta_tilde: float | None = None,
    spectrum: Spectrum | None = None,
) -> SignalDesign:
    """Optimal signal for a complete synergy graph, read off the incentive Laplacian.

    Statistic ``q_j' x`` is disclosed iff its omega is nonnegative, i.e.
    ``1/beta >= 2 (n - lambda_j)`` when ``beta_tilde == beta``. Pass a
    precomputed ``spectrum`` of ``laplacian(g)`` to skip the eigensolve.
    """
    n = g.n
    if spectrum is None:
        spectrum = sym_eig(laplacian(g))
    basis = average_first_basis(spectrum)
    omegas = uniform_synergy_omegas(spectrum.eigenvalues, n, beta, beta_tilde)
    keep = np.nonzero(omegas >= -DISCLOSE_TOL)[0]
    return SignalDesign(weights=basis[:, keep], omegas=omegas, disclosed_indices=keep)


def disclosure_threshold(lam: float, n: int) -> float:
    """Largest beta at which the statistic for Laplacian eigenvalue ``lam`` is disclosed."""
    if not -1e-8 <= lam <= n + 1e-8:
        raise ValueError(f"eigenvalue {lam} outside [0, n={n}]")
    if abs(lam - n) <= 1e-8:
        return math.inf
    return 1.0 / (2.0 * (n - lam))


def phase_diagram(g: Graph, beta_tilde_equals_beta: bool = True, spectrum: Spectrum | None = None) -> list[DisclosurePhase]:
    """Partition of beta in [0, inf) by optimal signal dimension, in increasing beta.

    Only defined for ``beta_tilde == beta``: with a separate principal weight
    the disclosure set grows with beta and is not a function of beta alone.
    """
    if not beta_tilde_equals_beta:
        raise ValueError("phase diagram requires beta_tilde == beta")
    n = g.n
    if spectrum is None:
        spectrum = sym_eig(laplacian(g))
    lam = spectrum.eigenvalues[1:]
    classes: list[list[float]] = []  # [value, multiplicity]
    for x in lam:
        if classes and abs(x - classes[-1][0]) <= THRESHOLD_MERGE_TOL:
            classes[-1][1] += 1
        else:
            classes.append([float(x), 1])
    thresholds = []
    for value, mult in classes:
        value = min(max(value, 0.0), float(n))
        thresholds.append((disclosure_threshold(value, n), value, mult))
    cuts = sorted({t for t, _, _ in thresholds if math.isfinite(t)})
    bounds = [0.0] + cuts + [math.inf]
    phases = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        # a class is disclosed on this phase iff its threshold reaches the phase's upper end
        active = [(v, m) for t, v, m in thresholds if t >= hi]
        phases.append(
            DisclosurePhase(
                beta_lo=lo,
                beta_hi=hi,
                dimension=1 + sum(m for _, m in active),
                disclosed_eigenvalue_classes=tuple([0.0] + [v for v, _ in active]),
            )
        )
    return phases


def disclosure_covariance(weights: np.ndarray, cov: np.ndarray) -> np.ndarray:
    """Covariance of E[x | Z'x] for x with covariance ``cov``: ``cov Z (Z' cov Z)^-1 Z' cov``."""
    z = np.asarray(weights, dtype=float)
    if z.ndim != 2 or z.shape[1] == 0:
        raise ValueError("disclosure matrix must have at least one column")
    if np.linalg.matrix_rank(z) < z.shape[1]:
        raise ValueError("disclosure matrix is rank deficient")
    sz = cov @ z
    out = sz @ np.linalg.solve(z.T @ sz, sz.T)
    return (out + out.T) / 2.0


def posterior_covariance(design: SignalDesign, prior: Prior) -> np.ndarray:
    """Covariance of the agents' posterior mean under ``design``."""
    w = design.weights
    n = w.shape[0]
    prior.check_dimension(n)
    if prior.rho == 0.0:
        if np.linalg.matrix_rank(w) < w.shape[1]:
            raise ValueError("disclosure matrix is rank deficient")
        out = prior.sigma2 * w @ np.linalg.solve(w.T @ w, w.T)
        return (out + out.T) / 2.0
    return disclosure_covariance(w, prior.covariance(n))


def informativeness(design: SignalDesign) -> np.ndarray:
    """Per-node var(xhat_i) / var(x_i) for orthonormal, uncorrelated-prior designs."""
    if not design.is_orthonormal():
        raise ValueError("informativeness needs orthonormal disclosure weights")
    return np.sum(design.weights**2, axis=1)


def design_gain(model: OrgModel, design: SignalDesign) -> float:
    """Improvement in the principal's payoff over disclosing nothing.

    Equals sigma^2 times the sum of disclosed omegas; for a whitened design the
    omegas already carry the prior scale.
    """
    selected = design.omegas[design.disclosed_indices]
    if design.whitened:
        return float(np.sum(selected))
    if model.prior.rho != 0.0:
        return float(np.trace(payoff_matrix(model).v @ posterior_covariance(design, model.prior)))
    return float(model.prior.sigma2 * np.sum(selected))


def plus_one_covariance(n: int, target: int, sigma2: float = 1.0) -> np.ndarray:
    """Posterior-mean covariance when ``x_target`` and the overall average are disclosed."""
    if not 0 <= target < n:
        raise IndexError(f"target {target} out of range for n={n}")
    if n < 2:
        raise ValueError("plus-one policy needs n >= 2")
    others = np.array([k for k in range(n) if k != target])
    s = np.zeros((n, n))
    s[target, target] = 1.0
    s[np.ix_(others, others)] = 1.0 / (n - 1)
    return sigma2 * s


def plus_one_gains(
    g: Graph,
    beta: float,
    beta_tilde: float | None = None,
    sigma2: float = 1.0,
    spectrum: Spectrum | None = None,
) -> np.ndarray:
    """Plus-one gain over average-only disclosure for every possible target."""
    n = g.n
    if n < 2:
        raise ValueError("plus-one policy needs n >= 2")
    if spectrum is None:
        spectrum = sym_eig(laplacian(g))
    q = average_first_basis(spectrum)
    omegas = uniform_synergy_omegas(spectrum.eigenvalues, n, beta, beta_tilde)
    return sigma2 * n / (n - 1) * (q[:, 1:] ** 2 @ omegas[1:])


def plus_one_gain(g: Graph, beta: float, target: int, beta_tilde: float | None = None, sigma2: float = 1.0) -> float:
    if not 0 <= target < g.n:
        raise IndexError(f"target {target} out of range for n={g.n}")
    return float(plus_one_gains(g, beta, beta_tilde, sigma2)[target])


def plus_one_best_target(g: Graph, beta: float, beta_tilde: float | None = None) -> int:
    gains = plus_one_gains(g, beta, beta_tilde)
    # near-equal gains (symmetric positions) resolve to the lowest index
    best = gains.max()
    tol = 1e-10 * max(1.0, abs(best))
    return int(np.nonzero(gains >= best - tol)[0][0])


def rho_invariance_check(
    g: Graph,
    beta: float,
    rho_list,
    beta_tilde: float | None = None,
    tol: float = 1e-6,
) -> bool:
    """True iff the disclosed subspace is the same for every correlation in ``rho_list``."""
    n = g.n
    k = make_special("complete", n)
    designs = []
    for rho in rho_list:
        if not (-1.0 / max(n - 1, 1) < rho < 1.0):
            raise ValueError(f"rho={rho} does not give a positive definite prior for n={n}")
        model = OrgModel(g, k, beta, beta_tilde, Prior(rho=float(rho)))
        designs.append(optimal_signal(model))
    base = designs[0].weights
    return all(d.dimension == designs[0].dimension and projection_distance(base, d.weights) <= tol for d in designs[1:])
