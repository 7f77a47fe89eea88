"""Chinese word segmentation with boundaries mined from speech pauses."""

from ._core import (
    Error,
    Model,
    complete,
    detect_pauses,
    prf,
    run_pipeline,
    strip_punctuation,
    tags_to_words,
    train,
    words_to_tags,
)

__all__ = [
    "Error",
    "Model",
    "complete",
    "detect_pauses",
    "prf",
    "run_pipeline",
    "strip_punctuation",
    "tags_to_words",
    "train",
    "words_to_tags",
]
