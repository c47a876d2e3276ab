from __future__ import annotations

import shutil
import uuid
from getpass import getuser
from pathlib import Path
from tempfile import gettempdir

import pytest

from privagg import settings
from privagg.crypto import PaillierKeyPair
from privagg.numeric import RandomSource

_tmptestdir = Path(gettempdir()) / f"privagg-tests-{getuser()}-{uuid.uuid4()!s}"


@pytest.fixture(scope="session")
def tmptestdir():
    Path(_tmptestdir).mkdir(parents=True, exist_ok=True)
    return _tmptestdir


def pytest_sessionfinish(session, exitstatus):  # noqa: ARG001
    if exitstatus == 0:
        shutil.rmtree(_tmptestdir, ignore_errors=True)


@pytest.fixture(autouse=True)
def _reset_settings():
    yield
    settings.DEFAULT_SETTINGS = settings.default_settings()


@pytest.fixture
def rng(request):
    return RandomSource.deterministic(request.node.name)


@pytest.fixture(scope="session")
def toy_key():
    return PaillierKeyPair.from_primes(5, 7)


@pytest.fixture(scope="session")
def key256():
    return PaillierKeyPair.generate(256, RandomSource.deterministic("key256"))


@pytest.fixture(scope="session")
def key512():
    return PaillierKeyPair.generate(512, RandomSource.deterministic("key512"))
