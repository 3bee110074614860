import numpy as np
import pytest

from dephkit import (
    controlled_unitary_family,
    validate_super_gram,
)

# The 4x4 qubit example maximally departing from passive-memory realizability:
# its off-diagonal block has diagonal entries 1 and 0.
CMAX = np.array(
    [
        [1, 0, 1, 0],
        [0, 1, 0, 0],
        [1, 0, 1, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)


def permutation(d, a, b):
    p = np.eye(d, dtype=complex)
    p[[a, b]] = p[[b, a]]
    return p


@pytest.fixture
def cmax():
    return validate_super_gram(CMAX, 2)


@pytest.fixture
def cmax_families():
    """Controlled-unitary families whose Gram matrix is CMAX.

    The circuit vectors are psi_00 = psi_10 = e0, psi_01 = e1, psi_11 = e2,
    reproducing CMAX entry by entry.
    """
    pre = controlled_unitary_family([np.eye(4, dtype=complex), permutation(4, 0, 1)])
    post = controlled_unitary_family([np.eye(4, dtype=complex), permutation(4, 1, 2)])
    return pre, post


def random_psd(d, rng, rank=None):
    rank = rank or d
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return g @ g.conj().T


def random_gram(d, rng):
    m = random_psd(d, rng)
    scale = 1 / np.sqrt(np.diag(m).real)
    return m * np.outer(scale, scale)
