import sys

import pytest
from loguru import logger


@pytest.fixture(autouse=True)
def quiet_logger():
    logger.remove()
    logger.add(sys.stderr, level="WARNING")
    yield
    logger.remove()
