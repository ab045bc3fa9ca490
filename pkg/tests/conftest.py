import numpy as np
import pytest

from diversity_lab import (
    McConfig,
    PlatformSet,
    SimilarityMatrix,
    load_bundled_similarity,
    run_mc_study,
)


@pytest.fixture(scope="session")
def five_platform_sim() -> SimilarityMatrix:
    """The bundled five-platform similarity fixture."""
    return load_bundled_similarity()


@pytest.fixture(scope="session")
def default_study(five_platform_sim):
    """The full default study (500 trials, 100 intervals, k=3, seed 0)."""
    return run_mc_study(McConfig(), five_platform_sim)


def make_similarity(scores) -> SimilarityMatrix:
    scores = np.asarray(scores, dtype=float)
    names = tuple(f"p{i}" for i in range(scores.shape[0]))
    return SimilarityMatrix(PlatformSet(names), scores)


@pytest.fixture
def identity_sim() -> SimilarityMatrix:
    """Five entirely distinct platforms (zero off-diagonal similarity)."""
    return make_similarity(np.eye(5))


@pytest.fixture
def clone_sim() -> SimilarityMatrix:
    """Five platforms with identical code (all similarities 1)."""
    return make_similarity(np.ones((5, 5)))
