"""Linear instability of unidirectional flows on the 2D torus."""

from ._instab import (
    EigenvectorResult,
    FlowParams,
    InstabError,
    RootResult,
    build_w,
    canonical_rep,
    classify,
    det_I_plus_K,
    det_root,
    dispersion,
    enumerate_classes,
    eval_trunc,
    find_root,
    growth_rate,
    max_real_eig,
    nu0_estimate,
)

__all__ = [
    "EigenvectorResult",
    "FlowParams",
    "InstabError",
    "RootResult",
    "build_w",
    "canonical_rep",
    "classify",
    "det_I_plus_K",
    "det_root",
    "dispersion",
    "enumerate_classes",
    "eval_trunc",
    "find_root",
    "growth_rate",
    "max_real_eig",
    "nu0_estimate",
]
