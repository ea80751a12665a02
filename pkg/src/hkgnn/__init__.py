"""Heat-kernel spectral graph networks with energy-dynamics and
over-squashing analysis, verified at desk scale on synthetic graphs."""

from .dynamics import (DynamicsReport, LayerSpec, ResponseCase, Verdict,
                       classify_response_case, closed_form_trajectory,
                       delayed_hfd_construct, dirichlet_energy, lfd_zeta_threshold,
                       make_hfd_zeta, propagate, simulate)
from .filters import (FilterFamily, FilterResponse, FilterSpec, Monotonicity,
                      combined_response, constant, cosine_eighth, evaluate, exp_poly,
                      heat_high, heat_low, identity_neg, identity_pos, monotonicity,
                      rescale_0_2, sine_eighth, zero)
from .graphs import (Graph, GraphError, build_graph, homophily_level,
                     normalized_adjacency, normalized_laplacian)
from .model import (Network, TrainConfig, TrainResult, TrainingDiverged, accuracy,
                    build_network, forward, load_checkpoint, loss_and_grads,
                    save_checkpoint, train)
from .presets import PRESET_NAMES, preset_filter_pair
from .spectral import (JacobiConvergenceError, NotSymmetricError,
                       SpectralDecomposition, apply_filter, decompose_graph, eig_sym,
                       graph_fourier, inverse_fourier, zero_multiplicity)
from .squashing import (DominanceError, SensitivityReport, TradeoffResult,
                        build_sensitivity, bound_matrix, energy_tradeoff,
                        exact_jacobian_norm, linear_stack_forward, osq_matrix,
                        osq_score, reweighting_matrix, sensitivity_bound)
from .synth import CsbmParams, Split, csbm_generate, load_dataset, make_split, save_dataset

__version__ = "0.1.0"
