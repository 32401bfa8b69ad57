import numpy as np
import pytest

import oracles
from qflag import _kernels
from qflag._kernels import available_backends

BACKENDS = available_backends()


def test_default_backend_is_known():
    assert _kernels.BACKEND in ("python", "cython")


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_gf2_rank_matches_oracle(name):
    rng = np.random.default_rng(11)
    for _ in range(30):
        m, n = rng.integers(1, 70, size=2)
        mat = (rng.random((m, n)) < rng.uniform(0.05, 0.6)).astype(np.uint8)
        assert BACKENDS[name].gf2_rank(mat) == oracles.gf2_rank(mat.tolist())


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_gf2_rank_edge_shapes(name):
    k = BACKENDS[name]
    assert k.gf2_rank(np.zeros((0, 4), dtype=np.uint8)) == 0
    assert k.gf2_rank(np.eye(130, dtype=np.uint8)) == 130
    assert k.gf2_rank(np.ones((5, 5), dtype=np.uint8)) == 1


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_lookup_subfaces(name):
    table = np.array([[0, 1], [0, 2], [1, 2], [2, 1]], dtype=np.int32)
    rows = np.array([[0, 1, 2], [0, 2, 1]], dtype=np.int32)
    pos = np.array([[1, 2], [0, 2], [0, 1]], dtype=np.int32)
    out = BACKENDS[name].lookup_subfaces(rows, pos, table)
    assert out.tolist() == [[2, 1, 0], [3, 0, 1]]
    missing = BACKENDS[name].lookup_subfaces(np.array([[3, 0, 1]], dtype=np.int32), pos, table)
    assert missing.tolist() == [[0, -1, -1]]


def test_forced_fallback_subprocess():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import qflag; print(qflag.BACKEND)"],
        env={"QFLAG_PURE_PYTHON": "1", "PATH": ""},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
