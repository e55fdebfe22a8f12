"""Sparse combinatorial group testing: constructions, bounds, verification, decoding."""

from .bounds import (
    BoundResult,
    lb_sparse_codewords,
    lb_sparse_tests,
    lb_unrestricted,
    plan_list_decodable,
    plan_sparse_codewords,
    plan_sparse_tests,
)
from .construct import CodePlan, Kind, build, identity_stack, ks_build, random_constant_weight
from .decode import DecodeResult, cover_decode, ks_list_decode
from .gf import FieldSpec, field_new, field_ops
from .matrix import CodeMatrix, Outcome, read_matrix, write_matrix
from .sim import SimConfig, SimReport, run_sim
from .verify import VerifyReport, correlation_stats, disjunct_exact, disjunct_sufficient

__version__ = "0.1.0"
