import sys

import pytest
from hypothesis import settings

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def atlas():
    import networkx as nx

    return [g for g in nx.graph_atlas_g()[1:]]
