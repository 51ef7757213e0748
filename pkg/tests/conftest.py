import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from uscut.maxflow import warm_up


@pytest.fixture(scope="session", autouse=True)
def _warm_solver():
    # JIT-compile the flow kernels once so timings elsewhere are steady
    warm_up()
