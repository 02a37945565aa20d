import pytest

from t2geom.sampling import SampleSpec, sample_points


@pytest.fixture(scope="session")
def points1():
    return sample_points(1, SampleSpec(count=25, seed=0))


@pytest.fixture(scope="session")
def points2():
    return sample_points(2, SampleSpec(count=25, seed=0))


@pytest.fixture(scope="session")
def witness(points2):
    from t2geom.finsler import finsler_witness

    return finsler_witness(2, points2)


@pytest.fixture(scope="session")
def witness_spray(witness, points2):
    from t2geom.finsler import canonical_spray

    G, E, rep = canonical_spray(witness, points2)
    assert rep.passed, rep.to_text()
    return G, E


@pytest.fixture(scope="session")
def witness_connections(witness, points2):
    from t2geom.finsler import canonical_connections

    g2, g1, G, rep = canonical_connections(witness, points2)
    assert rep.passed, rep.to_text()
    return g2, g1, G
