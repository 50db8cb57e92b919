"""Cross-layer scheduling for cooperative multi-hop cognitive radio networks.

Slot-level simulation of the inelastic (minimum PU utility) and elastic
(PU throughput with SU rewards) back-pressure algorithms, with an LP
capacity-region oracle for checking their optimality gaps.
"""
from .elastic import ElasticParams
from .inelastic import InelasticParams
from .maxweight import WeightedProblem, solve_exact, solve_gmm
from .oracle import OracleSolution, elastic_optimum, inelastic_optimum, sample_stationary_policy
from .sim import (ArrivalSpec, SimConfig, SummaryStats, evaluate, run, sweep, theorem_bounds,
                  verify_bounds)
from .topology import (CrnTopology, RouteSet, Schedule, build_topology, enumerate_feasible,
                       is_feasible, validate_topology)
from .utility import UtilitySpec

__version__ = "0.1.0"
