"""
Shared fixtures. Puts plugins/ and the repository root on sys.path the same
way the entry point does.
"""
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "plugins"))
sys.path.insert(0, ROOT)

import pytest

from cli.model_file import load_model

MODELS_DIR = os.path.join(ROOT, "models")


def model_path(name: str) -> str:
    return os.path.join(MODELS_DIR, f"{name}.model")


@pytest.fixture(scope="session")
def nonformal_wedge():
    return load_model(model_path("nonformal_wedge"))


@pytest.fixture(scope="session")
def example_algebra(nonformal_wedge):
    """Λ(a3, b3, u5; du = ab) / (degree >= 9) with room up to degree 12."""
    return nonformal_wedge.quotient_algebra(12)


@pytest.fixture(scope="session")
def example_free(nonformal_wedge):
    return nonformal_wedge.free_algebra(12)
