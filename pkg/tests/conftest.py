import time

import pytest

from voronoilab.voronoi import voronoi_pipeline

# wall time of the first (uncached) pipeline run per discriminant
PIPELINE_SECONDS: dict[int, float] = {}


def _timed_pipeline(d):
    # no cache dir: fixtures hold the full in-memory report for the session
    start = time.time()
    report = voronoi_pipeline(d, cache_dir=None)
    PIPELINE_SECONDS.setdefault(d, time.time() - start)
    return report


@pytest.fixture(scope="session")
def cache_root(tmp_path_factory):
    """Scratch cache directory for tests that exercise the JSON cache path."""
    return tmp_path_factory.mktemp("voronoi-cache")


@pytest.fixture(scope="session")
def report_d43():
    return _timed_pipeline(-43)


@pytest.fixture(scope="session")
def report_d67():
    return _timed_pipeline(-67)


@pytest.fixture(scope="session")
def report_d163():
    return _timed_pipeline(-163)
