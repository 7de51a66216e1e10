import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")
os.environ.setdefault("TRANSFORMERS_VERBOSITY", "error")

import pytest
from fastapi.testclient import TestClient

from loggen_shim.model import ShimModel
from loggen_shim.server import create_app
from loggen_shim.tinymodel import build_tiny_model


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory):
    return build_tiny_model(tmp_path_factory.mktemp("checkpoint"))


@pytest.fixture(scope="session")
def model(model_dir):
    return ShimModel.load(model_dir)


@pytest.fixture(scope="session")
def client(model):
    return TestClient(create_app(model))
