import os

import pytest


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SINGERFACT_HEAVY") == "1":
        return
    skip = pytest.mark.skip(reason="long case; set SINGERFACT_HEAVY=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
