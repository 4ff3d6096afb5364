"""Tweet sarcasm detection: preprocessing, embedding features, four
from-scratch classifiers, and F-measure evaluation with a context ablation."""

__version__ = "0.1.0"

from .dataset import NOT_SARCASM, SARCASM, Dataset, Kind, Record, load_dataset
from .embeddings import Layout, load_glove, load_precomputed
from .errors import FormatError, ValidationError
from .evaluation import f_measure, report
from .preprocess import PipelineConfig, default_config, preprocess_text

__all__ = [
    "__version__",
    "NOT_SARCASM",
    "SARCASM",
    "Dataset",
    "Kind",
    "Record",
    "load_dataset",
    "Layout",
    "load_glove",
    "load_precomputed",
    "FormatError",
    "ValidationError",
    "f_measure",
    "report",
    "PipelineConfig",
    "default_config",
    "preprocess_text",
]
