from __future__ import annotations

import numpy as np
import pytest

from faseg.crf import TrainConfig, train
from faseg.labeling import encode_stripped

from helpers import synth_corpus


@pytest.fixture(scope="session")
def toy_rng():
    return np.random.default_rng(20240811)


@pytest.fixture(scope="session")
def toy_sentences():
    rng = np.random.default_rng(7)
    return synth_corpus(rng, 80, min_len=15, max_len=25)


@pytest.fixture(scope="session")
def toy_heldout():
    rng = np.random.default_rng(8)
    return synth_corpus(rng, 40, min_len=15, max_len=25)


@pytest.fixture(scope="session")
def toy_model(toy_sentences):
    dataset = [encode_stripped(s) for s in toy_sentences]
    return train(dataset, TrainConfig(max_iterations=80))
