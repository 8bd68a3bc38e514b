"""3-SAT hardness gadgets and the SAT-via-counterfactual pipeline."""

from .build import (
    GADGET_KINDS,
    GadgetInstance,
    build_atm_gadget,
    build_gadget,
    build_knn_gadget,
    build_relu_gadget,
    default_bigm,
    relu_literal_index,
)
from .check import (
    Reduction,
    decode_assignment,
    encode_assignment,
    extract_assignment,
    reduce_sat,
    sat_via_cfe,
    verify_gadget,
)
from .cnf import (
    Assignment,
    CnfFormula,
    brute_force_sat,
    load_dimacs,
    parse_dimacs,
    random_restricted_cnf,
    to_dimacs,
)
from .io import dumps_gadget, gadget_from_dict, gadget_to_dict, load_gadget

__all__ = [
    "GADGET_KINDS",
    "Assignment",
    "CnfFormula",
    "GadgetInstance",
    "Reduction",
    "brute_force_sat",
    "build_atm_gadget",
    "build_gadget",
    "build_knn_gadget",
    "build_relu_gadget",
    "decode_assignment",
    "default_bigm",
    "dumps_gadget",
    "encode_assignment",
    "extract_assignment",
    "gadget_from_dict",
    "gadget_to_dict",
    "load_dimacs",
    "load_gadget",
    "parse_dimacs",
    "random_restricted_cnf",
    "reduce_sat",
    "relu_literal_index",
    "sat_via_cfe",
    "to_dimacs",
    "verify_gadget",
]
