"""Joint word-segmentation and ZWNJ correction for Persian text.

Casts both problems as per-character 3-class sequence labeling (nothing /
space / ZWNJ after each character) with a trainable linear-chain CRF, a
reproducible noise-injection dataset builder, and an evaluation harness.
"""

from .charset import CharClassTable, JoinerClass, classify_joiner, is_digit, is_joiner, normalize_text
from .corpus import Corpus, ParallelPair, SplitSpec, corpus_stats, load_parallel, load_tokenized_corpus, split_corpus
from .crf import CrfModel, TrainConfig, correct, load_model, predict, save_model, train
from .evaluation import EvalReport, align_strings, evaluate, evaluate_external, macro_average, score_baseline
from .labeling import Tag, TaggedSentence, decode, encode_retained, encode_stripped
from .noise import NoiseConfig, NoiseDraw, build_noisy_dataset, inject_noise

__version__ = "0.1.0"

__all__ = [
    "CharClassTable",
    "Corpus",
    "CrfModel",
    "EvalReport",
    "JoinerClass",
    "NoiseConfig",
    "NoiseDraw",
    "ParallelPair",
    "SplitSpec",
    "Tag",
    "TaggedSentence",
    "TrainConfig",
    "align_strings",
    "build_noisy_dataset",
    "classify_joiner",
    "corpus_stats",
    "correct",
    "decode",
    "encode_retained",
    "encode_stripped",
    "evaluate",
    "evaluate_external",
    "inject_noise",
    "is_digit",
    "is_joiner",
    "load_model",
    "load_parallel",
    "load_tokenized_corpus",
    "macro_average",
    "normalize_text",
    "predict",
    "save_model",
    "score_baseline",
    "split_corpus",
    "train",
]
