import sys
from pathlib import Path

# The repository is run from a checkout, not installed.
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive checks that take tens of seconds")
