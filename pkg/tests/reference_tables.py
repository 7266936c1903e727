"""Reference tables the test suite compares against.

All entries are transcribed from the published tabulations that the
built-in d = 2..5 families and operator sets are meant to reproduce.
"""

import numpy as np

from mubkit.matcore import root_of_unity

_W = root_of_unity(3, 1)
_W2 = root_of_unity(3, 2)

PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def alpha_d3():
    """The eight tabulated d = 3 operators, in class-major order."""
    s32 = np.sqrt(3 / 2)
    s2 = np.sqrt(2)
    return [
        s32 * np.array([[1, 0, 0], [0, 0, 0], [0, 0, -1]]),
        np.array([[1, 0, 0], [0, -2, 0], [0, 0, 1]]) / s2,
        np.array([[0, -1j * _W, 1j * _W2],
                  [1j * _W2, 0, -1j * _W],
                  [-1j * _W, 1j * _W2, 0]]) / s2,
        np.array([[0, -_W, -_W2],
                  [-_W2, 0, -_W],
                  [-_W, -_W2, 0]]) / s2,
        np.array([[0, -1j, 1j * _W2],
                  [1j, 0, -1j * _W2],
                  [-1j * _W, 1j * _W, 0]]) / s2,
        np.array([[0, -1, -_W2],
                  [-1, 0, -_W2],
                  [-_W, -_W, 0]]) / s2,
        np.array([[0, -1j * _W2, 1j * _W2],
                  [1j * _W, 0, -1j],
                  [-1j * _W, 1j, 0]]) / s2,
        np.array([[0, -_W2, -_W2],
                  [-_W, 0, -1],
                  [-_W, -1, 0]]) / s2,
    ]


# tabulated j = 2 projector-decomposition coefficient vectors; the
# acceptance suite compares these against the coupling-coefficient
# diagonals (they are expected to disagree; see the test that uses them)
J2_TABULATED_VECTORS = {
    1: np.sqrt(5) / 2 * np.array([1, -1, 0, 1, -1]),
    2: np.array([2, 1, 0, -2, -1]) / np.sqrt(2),
    3: np.array([1, -2, 0, -1, 2]) / np.sqrt(2),
    4: np.array([1, 1, -4, 1, 1]) / 2,
}
