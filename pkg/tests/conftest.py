import numpy as np
import pytest

from graphforge import PointSet


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def write_csv(tmp_path):
    """Write a small CSV from rows of (feature..., label?) tuples."""

    def _write(name, header, rows):
        path = tmp_path / name
        lines = [",".join(header)]
        lines += [",".join(str(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
        return path

    return _write


def random_points(rng, n, d):
    return PointSet(features=rng.random((n, d)))
