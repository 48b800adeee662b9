"""Haar systems, quotient-groupoid equivalences and convolution algebras on
fundamental groupoids of finite connected multigraphs, in exact arithmetic."""

from .convalg import SigmaWeights, NuWeights, convolve, involution, trivialize, untrivialize, verify_algebra_iso
from .cover import deck_act, pi1_generators, section, transversal
from .edgepath import Arrow, OrientedEdge, compose, enumerate_ball, inverse, reduce, unit
from .gpdcore import (EquivalenceBibundle, FundamentalGroupoid, check_axioms, pair_groupoid, quotient_groupoid,
                      transformation_groupoid)
from .graphspace import MultiGraph, pi1_rank, spanning_tree, validate_graph
from .haar import (HaarSystem, direct_weight_oracle, haar_from_base_measure, haar_from_transversal,
                   transformation_haar, transversal_from_haar, verify_group_case, verify_haar,
                   verify_section_independence)
from .measures import (FinSupp, compose_family, counting_family, cutoff, normalize_cutoff, recover_base_measure,
                       translate_measure, vertex_measure)

__version__ = "0.1.0"
