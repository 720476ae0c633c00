import os
import pathlib

import pytest

SAMPLES = pathlib.Path(
    os.environ.get("VPS_SAMPLES_DIR", pathlib.Path(__file__).resolve().parents[2] / "samples")
)


@pytest.fixture
def sample():
    def read(name):
        return (SAMPLES / name).read_text(encoding="utf-8")

    return read


@pytest.fixture
def sample_path():
    return lambda name: str(SAMPLES / name)


@pytest.fixture
def vps_bin():
    path = os.environ.get("VPS_BIN")
    if not path:
        pytest.skip("VPS_BIN is not set")
    return path
