"""Access to the corpus of algebra files shipped with the package."""

import os

from .algfile import parse_algebra_file

__all__ = ["CORPUS_NAMES", "corpus_path", "corpus_algebra"]

_DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

CORPUS_NAMES = (
    "lemma2d",
    "lemma3d",
    "example41",
    "remark41",
    "heisenberg",
    "example43",
    "example44a",
    "example44b",
)


def corpus_path(name):
    """Absolute path of a shipped ``.alg`` file; KeyError for unknown names."""
    if name not in CORPUS_NAMES:
        raise KeyError("no corpus algebra named %r" % name)
    return os.path.join(_DATA_DIR, name + ".alg")


def corpus_algebra(name):
    """Parse and return a shipped corpus algebra."""
    return parse_algebra_file(corpus_path(name))
