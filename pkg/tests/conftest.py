import pytest

from traceavert import InfectivityProfile, LambdaTable, default_params, load_fixture


@pytest.fixture(scope="session")
def params():
    return default_params()


@pytest.fixture(scope="session")
def profile(params):
    return InfectivityProfile.from_params(params)


@pytest.fixture(scope="session")
def table(params, profile):
    return LambdaTable.build(params, profile)


@pytest.fixture(scope="session")
def lambdas(table):
    return table.per_type


@pytest.fixture(scope="session")
def series():
    return load_fixture()
