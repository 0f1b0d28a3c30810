import pytest

from mosim import SceneConfig, builtin_lexicon

CORPUS = [
    "the ball rolled",
    "the ball rolled to the wall",
    "the ball rolled from the wall",
    "the ball slid",
    "the ball slid to the wall",
    "the ball bounced",
    "the bird flew",
    "the bird flew to the wall",
    "the ball moved",
    "the ball moved to the wall",
    "the ball arrived at the wall",
    "the ball left",
]


@pytest.fixture(scope="session")
def lex():
    return builtin_lexicon()


@pytest.fixture()
def cfg():
    return SceneConfig(seed=0)
