"""The target algebras E0..E12, all with one-dimensional square (E0 is trivial)."""

from __future__ import annotations

from enum import Enum

import numpy as np


class Label(str, Enum):
    E0 = "E0"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    E5 = "E5"
    E6 = "E6"
    E7 = "E7"
    E8 = "E8"
    E9 = "E9"
    E10 = "E10"
    E11 = "E11"
    E12 = "E12"

    def __str__(self) -> str:
        return self.value


_ROWS = {
    Label.E0: ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    Label.E1: ((1, 1, 0), (-1, -1, 0), (0, 0, 0)),
    Label.E2: ((1, 1, 0), (-1, -1, 0), (1, 1, 0)),
    Label.E3: ((1, 1, 0), (-1, -1, 0), (-1, -1, 0)),
    Label.E4: ((1, 0, 0), (0, 0, 0), (0, 0, 0)),
    Label.E5: ((1, 0, 0), (0, 0, 0), (1, 0, 0)),
    Label.E6: ((1, 0, 0), (0, 0, 0), (-1, 0, 0)),
    Label.E7: ((1, 0, 0), (1, 0, 0), (1, 0, 0)),
    Label.E8: ((1, 0, 0), (1, 0, 0), (-1, 0, 0)),
    Label.E9: ((1, 0, 0), (-1, 0, 0), (-1, 0, 0)),
    Label.E10: ((0, 0, 0), (0, 0, 0), (1, 0, 0)),
    Label.E11: ((0, 0, 0), (1, 0, 0), (1, 0, 0)),
    Label.E12: ((0, 0, 0), (1, 0, 0), (-1, 0, 0)),
}

LABELS = tuple(Label)


def canonical_matrix(label: Label | str) -> np.ndarray:
    return np.array(_ROWS[Label(label)], dtype=float)
