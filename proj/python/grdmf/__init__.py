"""Graph-regularized deep matrix factorization (HyPALM solver) for binary association matrices."""

from ._core import (
    GrdmfError,
    HyperParams,
    auc,
    aupr,
    cosine_similarity,
    fit,
    graph_laplacian,
    laplacian,
    load_association_csv,
    run_cv,
    solve_sylvester_sym,
    sparsify_pnn,
    split_entries,
    spd_inverse,
    sym_eigen,
    topk_metrics,
    truncated_svd,
)

__all__ = [
    "GrdmfError",
    "HyperParams",
    "auc",
    "aupr",
    "cosine_similarity",
    "fit",
    "graph_laplacian",
    "laplacian",
    "load_association_csv",
    "run_cv",
    "solve_sylvester_sym",
    "sparsify_pnn",
    "split_entries",
    "spd_inverse",
    "sym_eigen",
    "topk_metrics",
    "truncated_svd",
]
