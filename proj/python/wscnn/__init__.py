"""Weibo sentiment CNN pipeline: Python surface over the C++ core."""

try:
    from . import _wscnn as _core
except ImportError:  # running against a build tree, extension not in the package
    import _wscnn as _core

__all__ = [
    "History",
    "Model",
    "ModelConfig",
    "NaiveBayesScorer",
    "RunConfig",
    "SegDictionary",
    "TrainConfig",
    "Vocabulary",
    "build_model",
    "classify",
    "evaluation_report",
    "load_stopwords",
    "oversample",
    "pad",
    "param_counts",
    "remove_stopwords",
    "run_evaluate",
    "run_label",
    "run_pipeline",
    "run_preprocess",
    "run_split",
    "run_train",
    "segment",
    "split_dataset",
    "strip_mentions",
    "strip_punctuation",
    "train_model",
]

for _name in __all__:
    globals()[_name] = getattr(_core, _name)
del _name
