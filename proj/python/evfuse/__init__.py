"""Uncertainty-aware late fusion of per-modality classifier logits."""

from ._core import (
    DirichletParams,
    EvfuseError,
    FusionResult,
    LabelTaxonomy,
    Opinion,
    __version__,
    accuracy_neutral_tolerant,
    accuracy_standard,
    advanced_evidence,
    basic_evidence,
    confusion,
    dirichlet_to_opinion,
    ds_combine,
    ds_combine_oracle,
    evidence_to_dirichlet,
    fallback_rate,
    fuse_record,
    fuse_sequence,
    load_records,
    opinion_to_probabilities,
    select_best_frame,
)

__all__ = [
    "DirichletParams",
    "EvfuseError",
    "FusionResult",
    "LabelTaxonomy",
    "Opinion",
    "accuracy_neutral_tolerant",
    "accuracy_standard",
    "advanced_evidence",
    "basic_evidence",
    "confusion",
    "dirichlet_to_opinion",
    "ds_combine",
    "ds_combine_oracle",
    "evidence_to_dirichlet",
    "fallback_rate",
    "fuse_record",
    "fuse_sequence",
    "load_records",
    "opinion_to_probabilities",
    "select_best_frame",
]
