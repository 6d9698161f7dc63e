import pytest

from shimura_pq.ssgraph import build_graph, vertex_classes


@pytest.fixture(scope="session")
def vset11():
    return vertex_classes(11)


@pytest.fixture(scope="session")
def vset23():
    return vertex_classes(23)


@pytest.fixture(scope="session")
def vset47():
    return vertex_classes(47)


@pytest.fixture(scope="session")
def graph_13_47(vset47):
    return build_graph(13, 47, vset=vset47)


@pytest.fixture(scope="session")
def graph_5_23(vset23):
    return build_graph(5, 23, vset=vset23)


@pytest.fixture(scope="session")
def graph_13_11(vset11):
    return build_graph(13, 11, vset=vset11)
