"""Invariant checks on a single model instance, as run by ``orginfo validate``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import complement, is_connected, is_spanning_supergraph
from .org_model import OrgModel, payoff_matrix
from .signal_design import (
    design_gain,
    disclosure_threshold,
    optimal_signal,
    posterior_covariance,
    projection_distance,
    uniform_synergy_signal,
)
from .spectral import laplacian, sym_eig

__all__ = ["Check", "validate_model"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _check(name, passed, detail="") -> Check:
    return Check(name, bool(passed), detail)


def validate_model(model: OrgModel, seed: int = 0) -> list[Check]:
    n = model.n
    ones = np.ones(n)
    pm = payoff_matrix(model)
    b, v = pm.b, pm.v
    lap = laplacian(model.g)
    checks = [
        _check("B symmetric", np.max(np.abs(b - b.T)) <= 1e-10),
        _check("B 1 = 1", np.max(np.abs(b @ ones - ones)) <= 1e-10),
        _check("V 1 = 1", np.max(np.abs(v @ ones - ones)) <= 1e-8),
    ]
    rng = np.random.default_rng(seed)
    xhat = rng.normal(size=n)
    a = b @ xhat
    foc = (1 + model.beta * lap.diagonal()) * a - model.beta * model.g.weights @ a - xhat
    checks.append(_check("best-response first-order condition", np.max(np.abs(foc)) <= 1e-8, f"max residual {np.max(np.abs(foc)):.2e}"))

    min_omega = float(np.linalg.eigvalsh(v).min())
    dominated = np.all(model.beta * model.g.weights >= model.beta_tilde * model.g_tilde.weights)
    if dominated:
        checks.append(_check("V PSD under incentive dominance", min_omega >= -1e-8, f"min eigenvalue {min_omega:.3e}"))
    if model.beta_tilde <= 1.0 / (2 * n):
        checks.append(_check("V PSD for small beta_tilde", min_omega >= -1e-8, f"min eigenvalue {min_omega:.3e}"))

    design = optimal_signal(model)
    checks.append(_check("average disclosed", design.includes_average))
    cov = posterior_covariance(design, model.prior)
    gain = design_gain(model, design)
    direct = float(np.trace(v @ cov))
    checks.append(_check("gain equals tr(V var(xhat))", abs(gain - direct) <= 1e-7 * max(1.0, abs(direct)), f"{gain:.10g} vs {direct:.10g}"))

    grid = np.linspace(0.0, 2.0, 41)
    dims = []
    for t in grid:
        # scale both weights together; with beta = 0 only the principal's weight moves
        if model.beta > 0:
            beta, beta_tilde = t, t * model.beta_tilde / model.beta
        else:
            beta, beta_tilde = 0.0, t
        scaled = OrgModel(model.g, model.g_tilde, beta, beta_tilde, model.prior)
        dims.append(optimal_signal(scaled).dimension)
    checks.append(_check("dimension nonincreasing in beta", all(x >= y for x, y in zip(dims, dims[1:])), str(dims)))

    if model.synergy_complete and model.prior.rho == 0.0:
        uni = uniform_synergy_signal(model.g, model.beta, model.beta_tilde)
        dist = projection_distance(uni.weights, design.weights) if uni.dimension == design.dimension else 1.0
        checks.append(_check("uniform-synergy shortcut agrees", dist <= 1e-7, f"projection distance {dist:.2e}"))
        if model.symmetric_mode:
            vals = sym_eig(lap).eigenvalues
            full = model.beta <= disclosure_threshold(min(max(vals[1], 0.0), n), n) + 1e-12
            checks.append(_check("full revelation iff beta <= threshold(lambda_2)", (design.dimension == n) == full))
            if is_connected(complement(model.g)) and model.beta > 1.0 / (2 * (n - vals[-1])):
                checks.append(_check("minimum transparency above threshold(lambda_n)", design.dimension == 1))
    if is_spanning_supergraph(model.g, model.g_tilde) and model.symmetric_mode:
        checks.append(_check("full revelation under incentive supergraph", design.dimension == n))
    return checks
