"""Python interface to the style change detection harness.

The compiled extension carries the actual implementations; this package
re-exports them. Wheel builds place the extension inside the package; when
running against a plain CMake build tree, the module is found on PYTHONPATH.
"""

try:
    from stylebench._stylebench import *  # noqa: F401,F403
    from stylebench._stylebench import __doc__  # noqa: F401
except ImportError:  # CMake build tree: extension sits next to the package
    from _stylebench import *  # noqa: F401,F403
    from _stylebench import __doc__  # noqa: F401

__all__ = [
    "macro_f1",
    "hamming_norm",
    "correlations",
    "average_ranks",
    "build_prompt",
    "prompt_digest",
    "parse_changes",
    "all_changes",
    "no_changes",
    "random_k_changes",
    "cosine",
    "embed_units",
    "similarity_profile",
    "count_syllables",
    "readability",
    "author_count_feature_names",
    "author_count_features",
    "train_author_count",
    "predict_author_count",
]
