import random

import pytest
from hypothesis import settings, strategies as st

from tangent_rule.corpus import random_corpus, random_expr

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

SEED = 20260416


@pytest.fixture(scope="session")
def random_exprs():
    """1000 deterministic random canonical expressions of depth <= 8."""
    return random_corpus(1000, SEED, max_depth=8)


def exprs(max_depth=6):
    return st.integers(0, 2**32).map(lambda s: random_expr(random.Random(s), max_depth))


small_rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)
