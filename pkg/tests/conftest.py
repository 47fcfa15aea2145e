import random

import pytest
from hypothesis import strategies as st

from jacobi_linfty.operators import Patch, random_polynomial
from jacobi_linfty.ring import Polynomial
from jacobi_linfty.vdata import NormalMultiSection

VARS = ("x", "y", "z")


@st.composite
def polynomials(draw, variables=VARS, max_terms=4, max_exp=3):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_exp) for _ in variables]),
        st.fractions(min_value=-5, max_value=5, max_denominator=4),
        max_size=max_terms,
    ))
    return Polynomial(variables, terms)


def random_patch(rng, max_total=4):
    n = rng.randint(1, 2)
    d = rng.randint(1, max_total - n)
    return Patch(tuple(f"x{i + 1}" for i in range(n)), tuple(f"y{a + 1}" for a in range(d)))


def random_normal(patch, degree, rng, max_deg=2):
    from itertools import combinations

    entries = {}
    for idx in combinations(range(patch.d), degree):
        if rng.random() < 0.7:
            entries[idx] = random_polynomial(patch.base_vars, rng, max_deg).with_variables(patch.variables)
    return NormalMultiSection(patch, degree, entries)


@pytest.fixture
def rng():
    return random.Random(20240611)
