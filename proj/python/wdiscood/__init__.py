"""Feature-space OOD detection: whitened discriminant scoring and baselines."""

from ._core import (
    Error,
    KnnIndex,
    MahaModel,
    PcaModel,
    WldaModel,
    auroc,
    fit,
    fit_knn,
    fit_maha,
    fit_pca,
    fpr_at_tpr,
    generate_synth,
    load_model,
    project_wd,
    project_wdr,
    read_features,
    save_model,
    score_energy,
    score_knn,
    score_maha,
    score_maxlogit,
    score_msp,
    score_pr,
    score_wd,
    score_wdiscood,
    score_wdr,
    write_features,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "KnnIndex",
    "MahaModel",
    "PcaModel",
    "WldaModel",
    "auroc",
    "fit",
    "fit_knn",
    "fit_maha",
    "fit_pca",
    "fpr_at_tpr",
    "generate_synth",
    "load_model",
    "project_wd",
    "project_wdr",
    "read_features",
    "save_model",
    "score_energy",
    "score_knn",
    "score_maha",
    "score_maxlogit",
    "score_msp",
    "score_pr",
    "score_wd",
    "score_wdiscood",
    "score_wdr",
    "write_features",
]
