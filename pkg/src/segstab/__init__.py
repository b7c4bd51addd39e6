"""Stabbing the edges of a plane graph with few radius-r disks."""

from .epsilon_net import VARIANTS, VariantConstants, epsilon_net, net_size_bound, theta0, variant_for
from .generators import GenConfig, generate
from .instance import GraphClass, PlaneGraphInstance, validate
from .oracle import exact_opt, verify_hitting
from .solver import PapParams, Solution, gabriel_solve, iterative_reweighting, parametric_agarwal_pan, solve

__all__ = [
    "GenConfig",
    "GraphClass",
    "PapParams",
    "PlaneGraphInstance",
    "Solution",
    "VARIANTS",
    "VariantConstants",
    "epsilon_net",
    "exact_opt",
    "gabriel_solve",
    "generate",
    "iterative_reweighting",
    "net_size_bound",
    "parametric_agarwal_pan",
    "solve",
    "theta0",
    "validate",
    "variant_for",
    "verify_hitting",
]
