"""Induced-subposet-free set families: exact Lubell machinery, extractors, searches."""
from .constructions import (PartitionSpec, b2_lower, full_chain_family, levels, priv_sharp,
                            vc_extremal)
from .errors import (CapacityError, FormatError, PosetFreeError, PreconditionError,
                     ProofStepFailure, ThresholdNotMet, ValidationError)
from .extraction import (ExtractionReport, Extractor, antichain_extractor, b3_to_s3_reduce,
                         chain_extractor, extract_height2, extract_parallel, extract_series,
                         extract_std_example, extract_universal)
from .family import (SetFamily, Subcube, find_copy, inclusion_order, is_p_free, lubell_mass,
                     max_interval, private_system, vc_dimension)
from .numeric import ConstantReport, run_suite
from .poset import (Embedding, Poset, antichain, boolean_poset, chain, dual, find_induced_embedding,
                    named_poset, poset_from_relations, standard_example, universal,
                    universal_dual, v2)
from .textio import emit_family, emit_poset, parse_family, parse_poset
from .turan import SearchResult, la_star_exact, lubell_sup_exact

__all__ = [
    "PartitionSpec", "b2_lower", "full_chain_family", "levels", "priv_sharp", "vc_extremal",
    "CapacityError", "FormatError", "PosetFreeError", "PreconditionError", "ProofStepFailure",
    "ThresholdNotMet", "ValidationError", "ExtractionReport", "Extractor",
    "antichain_extractor", "b3_to_s3_reduce", "chain_extractor", "extract_height2",
    "extract_parallel", "extract_series", "extract_std_example", "extract_universal",
    "SetFamily", "Subcube", "find_copy", "inclusion_order", "is_p_free", "lubell_mass",
    "max_interval", "private_system", "vc_dimension", "ConstantReport", "run_suite",
    "Embedding", "Poset", "antichain", "boolean_poset", "chain", "dual",
    "find_induced_embedding", "named_poset", "poset_from_relations", "standard_example",
    "universal", "universal_dual", "v2", "emit_family", "emit_poset", "parse_family",
    "parse_poset", "SearchResult", "la_star_exact", "lubell_sup_exact",
]
