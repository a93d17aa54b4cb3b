"""Finite balleans, the free vector ideal over them, and exact membership certificates."""

__version__ = "0.1.0"

from .relations import Relation, compose, inverse, point_key
from .ballean import (E, EffectiveEntourage, FiniteMetric, GradedBallean, ModulusWitness,
                      ball, ball_of_set, check_asymorphism, check_axioms,
                      check_coarse_map, is_bounded, metric_ballean,
                      metric_from_scale, preset, product, restrict)
from .vectors import (Decomposition, DiffTerm, FreeVector, IdealBaseParams,
                      evaluate, verify_decomposition)
from .membership import (ideal_axiom_probe, ideal_membership,
                         reduce_to_support, restriction_check)
from .oracle import brute_force_oracle
