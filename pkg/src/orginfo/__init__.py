"""Optimal public information policies for networked organizations."""
from .graph_core import (
    DegreeSummary,
    Graph,
    GraphError,
    barabasi_albert,
    complement,
    degree_summary,
    erdos_renyi,
    graph_from_edgelist,
    graph_from_json,
    graph_to_json,
    is_connected,
    is_spanning_supergraph,
    make_special,
)
from .org_model import (
    ModelError,
    OrgModel,
    PayoffMatrix,
    Prior,
    efficient_matrix,
    equilibrium_matrix,
    expected_payoff,
    model_from_json,
    payoff_matrix,
)
from .signal_design import (
    DisclosurePhase,
    SignalDesign,
    design_gain,
    disclosure_threshold,
    informativeness,
    optimal_signal,
    phase_diagram,
    plus_one_best_target,
    plus_one_gain,
    posterior_covariance,
    rho_invariance_check,
    uniform_synergy_signal,
)
from .spectral import LaplacianReport, Spectrum, laplacian, laplacian_report, ring_spectrum_closed_form, sym_eig

__version__ = "0.1.0"
