"""Geometric evaluation of statistical graph models.

Sample microcanonical ensembles, compute barycenters and entropies, estimate
the edit distance expected value (EDEV) of a graph to a model, and run a
bootstrapped permutation test of model relevance.
"""

__version__ = "0.1.0"

from .ensembles import Entropy, barycenter, entropy, sample, sample_many, scale_sbm
from .errors import (ConfigurationError, DegenerateModelError, DimensionError, DomainError,
                     GraphspaceError, NormalizationError, ParseError, SpecError,
                     UndefinedError, UnsupportedModelError)
from .geometry import (DistanceDistribution, EdevEstimate, binomial_abs_dev, convergence_probe,
                       distance_to_barycenter, edev, edev_exact, edev_mc, modularity,
                       sbm_barycenter_distance)
from .graph import (DegreeSequence, Multigraph, Partition, RealGraph, degrees, edit_distance,
                    load_graph, load_real_graph, normalized_edit_distance, save_graph)
from .inference import (FitResult, TestReport, fit_cfmd, fit_sbm, greedy_min_entropy_partition,
                        permutation_p_value, permutation_test)
from .models import (CFMD, ER, SBM, Deterrence, Gravity, ModelSpec, Radiation, Waxman,
                     load_spec, save_spec, spec_from_dict, spec_to_dict)
from .rng import RngStream
