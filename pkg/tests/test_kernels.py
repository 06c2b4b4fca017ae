import os
import subprocess
import sys

import pytest

from linfty import kernels
from linfty._unshuffle_py import signed_unshuffle_count as py_count
from linfty.graded import SPACE_1_2, canonical_word, symmetric_basis


def jobs(max_weight=7):
    for n in range(1, max_weight + 1):
        for mono in symmetric_basis(SPACE_1_2, n):
            word = canonical_word(mono)
            for k in range(1, n + 1):
                for content in symmetric_basis(SPACE_1_2, k):
                    if all(c <= e for c, e in zip(content, mono)):
                        yield word, SPACE_1_2.odd_flags, k, content


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")
def test_compiled_matches_fallback():
    for job in jobs():
        assert kernels.signed_unshuffle_count(*job) == py_count(*job), job


def test_env_forces_fallback():
    code = "from linfty import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, LINFTY_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_single_letter_blocks():
    # w1 w2: moving w2 in front of w1 costs a sign
    odd = SPACE_1_2.odd_flags
    assert py_count((0, 1), odd, 1, (1, 0, 0)) == 1
    assert py_count((0, 1), odd, 1, (0, 1, 0)) == -1
    # w3^2: both unshuffles put one w3 first
    assert py_count((2, 2), odd, 1, (0, 0, 1)) == 2
