import os
from pathlib import Path

import pytest

from cmlv.algprecomp import CACHE_ENV, build_bundle, get_bundle

REPO_CACHE = Path(__file__).resolve().parent.parent / ".cmlv-cache"


def reference_cache() -> str:
    return os.environ.get(CACHE_ENV) or str(REPO_CACHE)


@pytest.fixture(scope="session")
def bundle17():
    # built once (about half a minute) and cached for later runs
    return get_bundle(17, reference_cache(), build=True)


@pytest.fixture(scope="session")
def bundle_m14():
    return get_bundle(-14, reference_cache(), build=True)


@pytest.fixture(scope="session")
def bundle3():
    return build_bundle(3)


@pytest.fixture(scope="session")
def bundle5():
    return build_bundle(5)


@pytest.fixture(scope="session")
def small_bundles(bundle3, bundle5):
    return {3: bundle3, 5: bundle5}
