from __future__ import annotations

import pytest

from hdx.buildings import building_cone, spherical_building
from hdx.complexes import (
    complete_complex,
    linial_meshulam,
    rp2_six_vertex,
    sphere_boundary,
)


@pytest.fixture(scope="session")
def rp2():
    return rp2_six_vertex()


@pytest.fixture(scope="session")
def dd3():
    return sphere_boundary(2)


@pytest.fixture(scope="session")
def k52():
    return complete_complex(5, 2)


@pytest.fixture(scope="session")
def k62():
    return complete_complex(6, 2)


@pytest.fixture(scope="session")
def k63():
    return complete_complex(6, 3)


@pytest.fixture(scope="session")
def s42():
    return spherical_building(4, 2)


@pytest.fixture(scope="session")
def cone42():
    return building_cone(2)


@pytest.fixture(scope="session")
def complex_zoo(rp2, dd3, k52, k62, k63, s42, cone42):
    zoo = {
        "rp2": rp2,
        "boundary_d3": dd3,
        "complete_5_2": k52,
        "complete_6_2": k62,
        "complete_6_3": k63,
        "building_4_2": s42,
        "building_cone_4_2": cone42,
        "sphere_3": sphere_boundary(3),
        "random_6_2": linial_meshulam(6, 2, 0.6, 11),
        "random_7_2": linial_meshulam(7, 2, 0.35, 5),
    }
    return zoo
