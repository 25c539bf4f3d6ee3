"""Dense subgraph discovery under the generalized-mean (p-mean) objective."""

from .exact import (ConvergenceError, ExactResult, SubmodularProblem, brute_force_opt,
                    exact_pmean, marginal_gain, minimize_submodular, psi_value)
from .graph import (Graph, GraphFormatError, NodeSet, induced_degrees, induced_edge_count,
                    parse_edge_list, read_edge_list, write_edge_list)
from .metrics import (DensityReport, UndefinedMetricError, delta_j, density_report, fp_value,
                      generalized_mean, p_density)
from .peel import (CoreDecomposition, PeelTrace, best_prefix, core_decomposition, gen_peel,
                   simple_peel)

__version__ = "0.1.0"
