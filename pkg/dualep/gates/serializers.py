"""JSON form of gates: row-major nested lists of ``[re, im]`` pairs."""

import json
from typing import Any

import numpy as np

from dualep.exceptions import ParameterError
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import as_cmat


def gate_to_json(u: CMat) -> list[list[list[float]]]:
    u = as_cmat(u)
    return [[[float(z.real), float(z.imag)] for z in row] for row in u]


def gate_from_json(data: Any) -> CMat:
    """
    Parse the nested ``[re, im]`` form back into a matrix.

    Raises:
        ParameterError: If the payload is not a square grid of pairs
    """
    if isinstance(data, str):
        data = json.loads(data)
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        msg = "Gate payload is not a numeric grid of [re, im] pairs"
        raise ParameterError(msg) from exc
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        msg = f"Gate payload must have shape (n, n, 2), got {arr.shape}"
        raise ParameterError(msg)
    return arr[..., 0] + 1j * arr[..., 1]
