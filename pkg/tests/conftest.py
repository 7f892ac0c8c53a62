import json
from pathlib import Path

import pytest

REF_PATH = Path(__file__).with_name("reference_values.json")


@pytest.fixture(scope="session")
def ref():
    return json.loads(REF_PATH.read_text())
