from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import assume, settings, strategies as st

from pentagram.core import InvariantField
from pentagram.invariant import is_nondegenerate

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")

# (n, N) pairs with gcd(N, n + 1) = 1
DIMS = [(2, 5), (2, 7), (3, 5), (3, 7), (4, 7), (5, 7), (6, 5)]


def coprime(n, N):
    return gcd(N, n + 1) == 1


rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9))
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def fields(draw, dims=DIMS):
    n, N = draw(st.sampled_from(dims))
    rows = draw(st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=N, max_size=N))
    return InvariantField(n, N, rows)


@st.composite
def nondegenerate_fields(draw, dims=DIMS):
    inv = draw(fields(dims))
    assume(is_nondegenerate(inv))
    return inv


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
