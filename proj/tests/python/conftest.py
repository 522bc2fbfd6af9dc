import os
import shutil

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("LEXPLAIN_CLI") or shutil.which("lexplain")
    if not path or not os.path.exists(path):
        pytest.skip("lexplain executable not available")
    return path


@pytest.fixture(scope="session")
def lx():
    return pytest.importorskip("lexplain")
