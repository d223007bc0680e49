import pytest

from dmdkit import MeasurementSpec, build_measurement, toy_run


@pytest.fixture(scope="session")
def toy():
    """Default forced spiral experiment, shared read-only across tests."""
    return toy_run(seed=0)


@pytest.fixture(scope="session")
def gaussian_op():
    return build_measurement(MeasurementSpec("gaussian", 128, 1024, seed=42))


@pytest.fixture(scope="session")
def lossless_op():
    """Single-pixel with p = n draws all indices, sorted: exactly identity."""
    return build_measurement(MeasurementSpec("single_pixel", 1024, 1024, seed=3))
