import pytest

from modules.cohomology import CohomologyModule
from modules.contact import ContactModule
from modules.model import zoo

ZOO_SAMPLE = ["torus2", "torus4", "heisenberg3", "kodaira_thurston", "kt_contact5", "cosymplectic_t5", "bw_torus4"]
CONTACT_SAMPLE = ["heisenberg3", "kt_contact5", "bw_torus4"]

_models = {}
_cohomology = {}


def get_model(name):
    if name not in _models:
        _models[name] = zoo(name)
    return _models[name]


def get_cohomology(name):
    if name not in _cohomology:
        _cohomology[name] = CohomologyModule(get_model(name))
    return _cohomology[name]


@pytest.fixture
def model():
    return get_model


@pytest.fixture
def coh():
    return get_cohomology


@pytest.fixture
def contact():
    return lambda name: ContactModule(get_model(name), get_cohomology(name))


@pytest.fixture
def kt():
    return get_model("kodaira_thurston")


@pytest.fixture
def heisenberg():
    return get_model("heisenberg3")
