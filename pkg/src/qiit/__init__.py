"""Quantum integrated information on small qudit networks."""

__version__ = "0.1.0"

from .channels import Channel, dual, compose, identity_channel, partitioned_channel, unitary_channel
from .concepts import EPS_PHI, Concept, ConceptualStructure, conceptual_structure, cs_distance
from .network import Bipartition, Network, StateSpec, build_state
from .operators import SupportedOperator, partial_trace, trace_distance
from .phi import PhiResult, phi, phi_bounds, phi_k
from .repertoires import average_xi, cause_effect_info, repertoire
