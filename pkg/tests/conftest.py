"""
Shared fixtures: named and seeded random surfaces, observables on them, and
temporary output directories for runner tests.
"""
import shutil
import tempfile

import pytest

from iet.permutation import Permutation
from observables.library import horizontal_character, random_cellwise_constant, random_trigonometric
from surface.library import GOLDEN, golden_torus, random_surface, stratum_permutation
from surface.zippered import SurfacePoint


@pytest.fixture
def golden():
    """Unit square torus with golden rotation; heights are exactly 1."""
    return golden_torus()


@pytest.fixture
def torus_eigenfunction(golden):
    """exp(2 pi i (X + g y)): f o phi_t = exp(2 pi i g t) f on the golden torus."""
    return horizontal_character(golden, 1, GOLDEN)


@pytest.fixture
def h2_permutation():
    return stratum_permutation("H(2)")


@pytest.fixture
def h11_permutation():
    return stratum_permutation("H(1,1)")


@pytest.fixture
def h2_surface(h2_permutation):
    """A fixed random unit-area surface in H(2)."""
    return random_surface(h2_permutation, 11)


@pytest.fixture
def h11_surface(h11_permutation):
    """A fixed random unit-area surface in H(1,1)."""
    return random_surface(h11_permutation, 12)


@pytest.fixture
def zero_mean_constant(h2_surface):
    """Zero-mean cellwise-constant observable on the H(2) surface."""
    return random_cellwise_constant(h2_surface, 5)


@pytest.fixture
def trig_observable(h2_surface):
    """Zero-mean trigonometric observable on the H(2) surface."""
    return random_trigonometric(h2_surface, 6)


@pytest.fixture
def torus_start():
    return SurfacePoint(0, 0.1234567, 0.0)


@pytest.fixture
def symmetric4():
    return Permutation.symmetric(4)


@pytest.fixture
def temp_output_dir():
    """Create a temporary output directory for runner artifacts."""
    temp_dir = tempfile.mkdtemp()
    yield temp_dir
    # Cleanup
    shutil.rmtree(temp_dir)
