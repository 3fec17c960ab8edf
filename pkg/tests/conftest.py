import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from agrmc import compose, global_formula, parse_spec

SPECS = pathlib.Path(__file__).parent.parent / "specs"


def load_spec(name: str):
    return parse_spec((SPECS / f"{name}.stv").read_text())


@pytest.fixture(scope="session")
def voting2_doc():
    return load_spec("voting2")


@pytest.fixture(scope="session")
def voting2_model(voting2_doc):
    return compose(voting2_doc)


@pytest.fixture(scope="session")
def voting3_doc():
    return load_spec("voting3")


@pytest.fixture(scope="session")
def voting3_model(voting3_doc):
    return compose(voting3_doc)


@pytest.fixture(scope="session")
def gadget_doc():
    return load_spec("gadget")


@pytest.fixture(scope="session")
def gadget_model(gadget_doc):
    return compose(gadget_doc)


@pytest.fixture(scope="session")
def gadget_formula(gadget_doc):
    return global_formula(gadget_doc)
