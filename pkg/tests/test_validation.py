import numpy as np

from orginfo.graph_core import Graph, make_special
from orginfo.org_model import OrgModel, Prior
from orginfo.validation import validate_model

from oracles import random_graph_weights


def names(checks):
    return {c.name for c in checks}


def test_star_all_pass():
    checks = validate_model(OrgModel(make_special("star", 5), make_special("complete", 5), 0.2))
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    assert len(checks) >= 8


def test_random_models_pass(rng):
    for _ in range(40):
        n = int(rng.integers(2, 10))
        g = Graph(n, random_graph_weights(rng, n))
        gt = make_special("complete", n) if rng.integers(2) else Graph(n, random_graph_weights(rng, n))
        bt = float(10 ** rng.uniform(-2, 1)) if rng.integers(2) else None
        rho = float(rng.uniform(0, 0.8)) if rng.integers(3) == 0 else 0.0
        m = OrgModel(g, gt, float(10 ** rng.uniform(-2, 1)), bt, Prior(rho=rho))
        failed = [c for c in validate_model(m) if not c.passed]
        assert not failed, failed


def test_symmetric_complete_runs_threshold_checks():
    full = names(validate_model(OrgModel(make_special("path", 4), make_special("complete", 4), 0.3)))
    asym = names(validate_model(OrgModel(make_special("path", 4), make_special("complete", 4), 0.3, 0.5)))
    key = "full revelation iff beta <= threshold(lambda_2)"
    assert key in full and key not in asym


def test_deterministic():
    m = OrgModel(make_special("ring", 6), make_special("complete", 6), 0.2)
    a, b = validate_model(m, seed=3), validate_model(m, seed=3)
    assert [(c.name, c.passed, c.detail) for c in a] == [(c.name, c.passed, c.detail) for c in b]
    assert np.all([c.passed for c in a])
