"""Explainable multi-label classification of court judgements."""

import os as _os

_bundled = _os.path.join(_os.path.dirname(__file__), "lexica")
if _os.path.isdir(_bundled):
    _os.environ.setdefault("LEXPLAIN_LEXICA", _bundled)

from ._lexplain import (
    ConfigError,
    DataError,
    anonymize,
    entities,
    entropy,
    evaluate,
    explain,
    gini,
    jaro,
    metrics,
    preprocess,
    spearman,
    synth_corpus,
    train,
)

__all__ = [
    "ConfigError",
    "DataError",
    "anonymize",
    "entities",
    "entropy",
    "evaluate",
    "explain",
    "gini",
    "jaro",
    "metrics",
    "preprocess",
    "spearman",
    "synth_corpus",
    "train",
]
