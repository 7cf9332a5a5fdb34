import itertools

import pytest
from hypothesis import HealthCheck, settings

from clonekit import FiniteFunction, GeneratorSet, QSet

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

MAJ = FiniteFunction.from_callable(2, 3, lambda x, y, z: (x & y) | (y & z) | (x & z))
XOR = FiniteFunction.from_callable(2, 3, lambda x, y, z: x ^ y ^ z)
AND = FiniteFunction(2, 2, (0, 0, 0, 1))
OR = FiniteFunction(2, 2, (0, 1, 1, 1))
EVEN = QSet.of(2, 3, [r for r in itertools.product((0, 1), repeat=3) if sum(r) % 2 == 0])


@pytest.fixture
def maj_gens():
    return GeneratorSet.of(2, [MAJ])


@pytest.fixture
def xor_gens():
    return GeneratorSet.of(2, [XOR])
