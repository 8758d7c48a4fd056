import random

import pytest

import orbitprimes as op


@pytest.fixture
def quad_system():
    """The running example: S = {x^2 + 1, x^2 - 1}, P = 0."""
    f1 = op.RationalMapQ.from_polynomial([1, 0, 1])
    f2 = op.RationalMapQ.from_polynomial([1, 0, -1])
    return op.SemigroupSystem((f1, f2)), op.normalize_point(0, 1)


def random_map(rng: random.Random, degree: int, height: int = 9,
               polynomial: bool = False) -> op.RationalMapQ:
    """A random morphism of the given degree with coefficients in [-H, H]."""
    while True:
        num = [rng.randint(-height, height) for _ in range(degree + 1)]
        if polynomial:
            den = [0] * degree + [1]
        else:
            den = [rng.randint(-height, height) for _ in range(degree + 1)]
        try:
            return op.RationalMapQ.from_forms(op.BinaryFormZ(tuple(num)),
                                              op.BinaryFormZ(tuple(den)))
        except op.ContractError:
            continue


def random_system(rng: random.Random, r: int, max_degree: int = 4,
                  height: int = 9, polynomial: bool = False
                  ) -> op.SemigroupSystem:
    maps = []
    while len(maps) < r:
        f = random_map(rng, rng.randint(2, max_degree), height, polynomial)
        if all((f.num.coeffs, f.den.coeffs) != (g.num.coeffs, g.den.coeffs)
               for g in maps):
            maps.append(f)
    return op.SemigroupSystem(tuple(maps))
