"""Organizational problem instances and the matrices they induce.

Agents best-respond to the public expectation ``xhat`` with ``a = B xhat``
where ``B = (I + beta L)^-1``; the principal's expected payoff depends on the
signal only through ``E[xhat' V xhat]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .graph_core import Graph, GraphError, _graph_from_obj, graph_to_obj, make_special
from .spectral import laplacian

__all__ = [
    "Prior",
    "OrgModel",
    "PayoffMatrix",
    "ModelError",
    "equilibrium_matrix",
    "efficient_matrix",
    "payoff_matrix",
    "expected_payoff",
    "model_from_json",
    "model_to_json_obj",
]

PSD_TOL = 1e-8


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Prior:
    """Exchangeable Gaussian prior: mean ``mu``, variance ``sigma2``, pairwise correlation ``rho``."""

    mu: float = 0.0
    sigma2: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ModelError(f"sigma2 must be positive, got {self.sigma2}")
        if not -1.0 < self.rho < 1.0:
            raise ModelError(f"rho must lie in (-1, 1), got {self.rho}")

    def covariance(self, n: int) -> np.ndarray:
        return self.sigma2 * ((1.0 - self.rho) * np.eye(n) + self.rho * np.ones((n, n)))

    def check_dimension(self, n: int) -> None:
        # (1 - rho) I + rho 11' has eigenvalues 1 - rho and 1 + (n - 1) rho
        if n > 1 and not 1.0 + (n - 1) * self.rho > 0:
            raise ModelError(
                f"prior covariance is not positive definite: rho={self.rho} <= -1/(n-1) for n={n}"
            )


@dataclass(frozen=True, eq=False)
class OrgModel:
    g: Graph
    g_tilde: Graph
    beta: float
    beta_tilde: float | None = None
    prior: Prior = field(default_factory=Prior)

    def __post_init__(self):
        if self.g.n != self.g_tilde.n:
            raise ModelError(f"graph sizes differ: {self.g.n} vs {self.g_tilde.n}")
        if self.beta_tilde is None:
            object.__setattr__(self, "beta_tilde", self.beta)
        if not self.beta >= 0 or not self.beta_tilde >= 0:
            raise ModelError("beta and beta_tilde must be nonnegative")
        self.prior.check_dimension(self.n)

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def symmetric_mode(self) -> bool:
        return self.beta_tilde == self.beta

    @property
    def synergy_complete(self) -> bool:
        return self.g_tilde == make_special("complete", self.n)

    def prior_covariance(self) -> np.ndarray:
        return self.prior.covariance(self.n)


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    v: np.ndarray
    b: np.ndarray
    symmetric_mode: bool


def _spd_inverse(m: np.ndarray) -> np.ndarray:
    factor = cho_factor(m, lower=True)
    inv = cho_solve(factor, np.eye(m.shape[0]))
    inv = (inv + inv.T) / 2.0
    resid = np.max(np.abs(m @ inv - np.eye(m.shape[0])))
    if resid > 1e-9:
        raise ArithmeticError(f"inverse residual {resid:.3e} exceeds 1e-9")
    return inv


def equilibrium_matrix(model: OrgModel) -> np.ndarray:
    """Nash response matrix ``(I + beta L)^-1``."""
    n = model.n
    return _spd_inverse(np.eye(n) + model.beta * laplacian(model.g))


def efficient_matrix(model: OrgModel) -> np.ndarray:
    """Team-optimal response matrix ``(I + 2 beta_tilde L_tilde)^-1``."""
    n = model.n
    return _spd_inverse(np.eye(n) + 2.0 * model.beta_tilde * laplacian(model.g_tilde))


def payoff_matrix(model: OrgModel) -> PayoffMatrix:
    n = model.n
    b = equilibrium_matrix(model)
    middle = np.eye(n) - 2.0 * (model.beta_tilde * laplacian(model.g_tilde) - model.beta * laplacian(model.g))
    v = b @ middle @ b
    v = (v + v.T) / 2.0
    return PayoffMatrix(v=v, b=b, symmetric_mode=model.symmetric_mode)


def _check_psd(m: np.ndarray, what: str) -> None:
    lo = float(np.linalg.eigvalsh((m + m.T) / 2.0).min())
    if lo < -PSD_TOL * max(1.0, float(np.max(np.abs(m)))):
        raise ModelError(f"{what} is not positive semidefinite (min eigenvalue {lo:.3e})")


def expected_payoff(model: OrgModel, posterior_cov) -> float:
    """Principal's expected payoff when the posterior mean has covariance ``posterior_cov``.

    ``posterior_cov`` must be PSD and dominated by the prior covariance, as any
    conditional expectation's covariance is.
    """
    p = np.asarray(posterior_cov, dtype=float)
    n = model.n
    if p.shape != (n, n):
        raise ModelError(f"posterior covariance must be {n}x{n}, got {p.shape}")
    if np.max(np.abs(p - p.T)) > 1e-10 * max(1.0, float(np.max(np.abs(p)))):
        raise ModelError("posterior covariance is not symmetric")
    _check_psd(p, "posterior covariance")
    sigma = model.prior_covariance()
    _check_psd(sigma - p, "prior minus posterior covariance")
    v = payoff_matrix(model).v
    mu = model.prior.mu
    ones = np.ones(n)
    return float(-np.trace(sigma) - n * mu**2 + np.trace(v @ p) + mu**2 * ones @ v @ ones)


def _graph_field(data, key: str, n: int | None) -> Graph:
    value = data.get(key)
    if value in ("complete", "empty"):
        if n is None:
            raise ModelError(f'"{key}": "{value}" needs the incentive graph size')
        return make_special("complete", n) if value == "complete" else Graph.empty(n)
    try:
        return _graph_from_obj(value)
    except GraphError as exc:
        raise ModelError(f'"{key}": {exc}') from exc


def model_from_json(text: str) -> OrgModel:
    """Parse the model file format.

    ``{"incentive": <graph>, "synergy": <graph>|"complete", "beta": f,
    "beta_tilde": f?, "mu": f?, "sigma2": f?, "rho": f?}``
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelError("model JSON must be an object")
    for key in ("incentive", "beta"):
        if key not in data:
            raise ModelError(f'model JSON missing "{key}"')
    g = _graph_field(data, "incentive", None)
    g_tilde = _graph_field(data, "synergy", g.n) if "synergy" in data else make_special("complete", g.n)
    try:
        prior = Prior(
            mu=float(data.get("mu", 0.0)),
            sigma2=float(data.get("sigma2", 1.0)),
            rho=float(data.get("rho", 0.0)),
        )
        beta = float(data["beta"])
        beta_tilde = data.get("beta_tilde")
        beta_tilde = None if beta_tilde is None else float(beta_tilde)
    except (TypeError, ValueError) as exc:
        raise ModelError(str(exc)) from exc
    return OrgModel(g, g_tilde, beta, beta_tilde, prior)


def model_to_json_obj(model: OrgModel) -> dict:
    return {
        "incentive": graph_to_obj(model.g),
        "synergy": "complete" if model.synergy_complete else graph_to_obj(model.g_tilde),
        "beta": model.beta,
        "beta_tilde": model.beta_tilde,
        "mu": model.prior.mu,
        "sigma2": model.prior.sigma2,
        "rho": model.prior.rho,
    }
