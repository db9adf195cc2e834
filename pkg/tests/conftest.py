from __future__ import annotations

from pathlib import Path

import pytest

from formalpi.cli import load_presentation

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

SIMPLY_CONNECTED = [
    "s2",
    "s3",
    "s5",
    "cp2",
    "cp3",
    "wedge_s2_s2",
    "rand_formal_1",
    "rand_formal_2",
]

CHARACTER_CORPUS = ["char_pair", "char_even", "char_torsion"]

ALL_CORPUS = SIMPLY_CONNECTED + ["torus"] + CHARACTER_CORPUS


def corpus_path(name: str) -> Path:
    return CORPUS / f"{name}.json"


@pytest.fixture(scope="session")
def corpus():
    return {name: load_presentation(corpus_path(name)) for name in ALL_CORPUS}
