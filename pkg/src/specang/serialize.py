"""JSON layout for complex matrices and frames.

Matrices are stored row-major as nested lists of [re, im] pairs.  Sampling
seeds are 64-bit unsigned integers and are echoed into every output document
for reproducibility.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ValidationError


def matrix_to_pairs(M) -> list:
    """Complex matrix -> row-major nested lists of [re, im] pairs."""
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_pairs(data) -> np.ndarray:
    """Inverse of matrix_to_pairs."""
    try:
        rows = [[complex(re, im) for re, im in row] for row in data]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed [re, im] matrix payload: {exc}") from exc
    M = np.array(rows, dtype=complex)
    if M.ndim != 2:
        raise ValidationError("matrix payload must be two-dimensional")
    return M


def dump_json(path, document) -> None:
    with open(path, "w") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
