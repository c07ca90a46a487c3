import os

import hypothesis
import pytest

from unanimity import verify

hypothesis.settings.register_profile(
    "suite", derandomize=True, deadline=None, max_examples=60
)
hypothesis.settings.load_profile("suite")


@pytest.fixture(scope="session", autouse=True)
def _workers():
    verify.set_workers(int(os.environ.get("UNANIMITY_WORKERS", os.cpu_count() or 1)))
