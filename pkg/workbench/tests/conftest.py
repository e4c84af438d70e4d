import os
import sys

import pytest

# Get the absolute path of the workbench directory
workbench_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Add the workbench directory to the Python path
sys.path.append(workbench_dir)

from app.services.corpus import random_bytes  # noqa: E402


@pytest.fixture(scope="session")
def random_data():
    """256 KiB of seeded random bytes shared by the chunker tests."""
    return random_bytes(0xC0FFEE, 256 * 1024)


@pytest.fixture(scope="session")
def small_random_data():
    return random_bytes(0x5EED, 32 * 1024)
