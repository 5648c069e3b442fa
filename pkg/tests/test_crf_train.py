from __future__ import annotations

import numpy as np
import pytest

from faseg.corpus import Corpus
from faseg.crf import TrainConfig, predict, train
from faseg.errors import TrainingError
from faseg.evaluation import evaluate
from faseg.labeling import Tag, encode_stripped
from faseg.noise import NoiseConfig, build_noisy_dataset

from helpers import DAL, synth_corpus


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(c1=-1)
    with pytest.raises(ValueError):
        TrainConfig(max_iterations=0)


def test_empty_dataset_rejected():
    with pytest.raises(TrainingError):
        train([])


def test_all_none_dataset_predicts_none():
    dataset = [encode_stripped(s) for s in ("abc", "abcd", "bca", "cab")]
    model = train(dataset, TrainConfig(max_iterations=30))
    for ts in dataset:
        assert all(t == Tag.NONE for t in predict(model, ts.chars))


def test_toy_rule_recovered_with_perfect_f1(toy_model, toy_heldout):
    gold, pred = [], []
    for s in toy_heldout:
        ts = encode_stripped(s)
        gold.extend(int(t) for t in ts.tags)
        pred.extend(int(t) for t in predict(toy_model, ts.chars))
    report = evaluate(gold, pred)
    assert report.f1 == (1.0, 1.0, 1.0)
    assert report.macro_f1 == 1.0


def test_huge_l1_zeroes_state_weights():
    rng = np.random.default_rng(3)
    dataset = [encode_stripped(s) for s in synth_corpus(rng, 20, 10, 15)]
    model = train(dataset, TrainConfig(c1=1e3, c2=0.1, max_iterations=20))
    assert np.all(model.state_weights == 0.0)


def test_objective_monotone_and_reported(toy_sentences):
    dataset = [encode_stripped(s) for s in toy_sentences[:30]]
    infos = []
    train(dataset, TrainConfig(max_iterations=25), progress=infos.append)
    assert infos, "progress callback never called"
    objectives = [i.objective for i in infos]
    assert all(b >= a - 1e-9 for a, b in zip(objectives, objectives[1:]))
    assert [i.iteration for i in infos] == list(range(1, len(infos) + 1))


def test_validation_f1_reported_not_acted_on(toy_sentences, toy_heldout):
    dataset = [encode_stripped(s) for s in toy_sentences[:30]]
    valid = [encode_stripped(s) for s in toy_heldout[:10]]
    infos = []
    train(dataset, TrainConfig(max_iterations=10), valid=valid, progress=infos.append)
    assert all(i.valid_macro_f1 is not None for i in infos)
    assert 0.0 <= infos[-1].valid_macro_f1 <= 1.0


def test_training_deterministic(toy_sentences):
    dataset = [encode_stripped(s) for s in toy_sentences[:25]]
    cfg = TrainConfig(max_iterations=15)
    m1 = train(dataset, cfg)
    m2 = train(dataset, cfg)
    np.testing.assert_array_equal(m1.state_weights, m2.state_weights)
    np.testing.assert_array_equal(m1.transition_weights, m2.transition_weights)
    assert m1.feature_vocab == m2.feature_vocab


def test_training_on_noisy_mode_b_data():
    # Mode-B windows see retained separators, so the model is judged on
    # held-out mode-B samples (the distribution it was trained for).
    rng = np.random.default_rng(9)
    corpus = Corpus(sentences=tuple(synth_corpus(rng, 40, 12, 20)))
    heldout = Corpus(sentences=tuple(synth_corpus(rng, 20, 12, 20)))
    dataset = build_noisy_dataset(corpus, NoiseConfig(seed=77))
    valid = build_noisy_dataset(heldout, NoiseConfig(seed=78))
    infos = []
    train(dataset, TrainConfig(max_iterations=40), valid=valid, progress=infos.append)
    assert infos[-1].valid_macro_f1 >= 0.95
    assert infos[-1].valid_macro_f1 > infos[0].valid_macro_f1


def test_min_feature_count_cutoff():
    from faseg.crf import compile_dataset

    dataset = [encode_stripped(s) for s in ("ab", "ab", "ac")]
    full, full_vocab = compile_dataset(dataset)
    cut, cut_vocab = compile_dataset(dataset, min_feature_count=2)
    assert len(cut_vocab) < len(full_vocab)
    assert "w[0]=c" in full_vocab and "w[0]=c" not in cut_vocab
    assert "w[0]=a" in cut_vocab  # seen three times
    # A model trained with the cutoff still shrinks its weight table.
    model = train(dataset, TrainConfig(max_iterations=5, min_feature_count=2))
    assert model.n_features == len(cut_vocab)


def test_trained_toy_tags_space_after_trigger(toy_model):
    # Rule: space after DAL except sentence-finally.
    word = "ب" + DAL + "با"
    tags = predict(toy_model, word)
    assert tags[1] == Tag.SPACE
