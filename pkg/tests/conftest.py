import numpy as np
import pytest

from budgetdp.assets import (
    bundled_asset,
    load_embeddings,
    load_gazetteer,
    load_ic_table,
    load_pos_lexicon,
    load_stopwords,
    read_corpus,
)
from budgetdp.embeddings import Embedder


@pytest.fixture(scope="session")
def mini_embedder():
    return load_embeddings(bundled_asset("mini_embeddings.txt"))


@pytest.fixture(scope="session")
def mini_stopwords():
    return load_stopwords(bundled_asset("mini_stopwords.txt"))


@pytest.fixture(scope="session")
def mini_gazetteer():
    return load_gazetteer(bundled_asset("mini_gazetteer.txt"))


@pytest.fixture(scope="session")
def mini_ic_table():
    return load_ic_table(bundled_asset("mini_ic_table.tsv"))


@pytest.fixture(scope="session")
def mini_pos_lexicon():
    return load_pos_lexicon(bundled_asset("mini_pos_lexicon.tsv"))


@pytest.fixture(scope="session")
def mini_corpus():
    return read_corpus(bundled_asset("mini_corpus.jsonl"))


@pytest.fixture(scope="session")
def mini_assets(mini_embedder, mini_stopwords, mini_gazetteer, mini_ic_table, mini_pos_lexicon):
    return {
        "embedder": mini_embedder,
        "stopwords": mini_stopwords,
        "gazetteer": mini_gazetteer,
        "ic_table": mini_ic_table,
        "pos_lexicon": mini_pos_lexicon,
    }


@pytest.fixture
def plane_embedder():
    """Tiny 2-d embedder with hand-picked geometry for exact-value tests."""
    return Embedder(
        {
            "east": np.array([1.0, 0.0]),
            "north": np.array([0.0, 1.0]),
            "northeast": np.array([1.0, 1.0]),
            "south": np.array([0.0, -1.0]),
            "west": np.array([-1.0, 0.0]),
        }
    )
