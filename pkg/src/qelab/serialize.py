"""Tagged JSON encoding of checker inputs.

Worst-case dumps and the replay command move whole checker instances through
JSON; every supported input type gets a ``type`` tag so the round trip is
unambiguous.  Matrices are stored as separate real/imaginary nested lists.
"""

from __future__ import annotations

import numpy as np

from .channels import KrausChannel
from .errors import BadConfig
from .states import (
    DensityMatrix,
    MarkovSpec,
    MultipartiteState,
    SubnormalizedOperator,
    markov_spec_from_json,
    markov_spec_to_json,
    matrix_from_json,
    matrix_to_json,
    state_from_json,
    state_to_json,
)


def serialize_value(value) -> dict:
    if isinstance(value, (DensityMatrix, MultipartiteState)):
        return {"type": "state", **state_to_json(value)}
    if isinstance(value, SubnormalizedOperator):
        return {"type": "subnormalized", **matrix_to_json(value.mat)}
    if isinstance(value, KrausChannel):
        return {"type": "channel", **value.to_json()}
    if isinstance(value, MarkovSpec):
        return {"type": "markov_spec", **markov_spec_to_json(value)}
    if isinstance(value, np.ndarray):
        return {"type": "matrix", **matrix_to_json(value)}
    if isinstance(value, bool):
        return {"type": "scalar", "value": value}
    if isinstance(value, (int, np.integer)):
        # kept exact: wide integers (e.g. Monte Carlo seeds) do not survive
        # a float round trip
        return {"type": "scalar", "value": int(value)}
    if isinstance(value, (float, np.floating)):
        return {"type": "scalar", "value": float(value)}
    if isinstance(value, (list, tuple)) and all(
        isinstance(v, (int, float)) for v in value
    ):
        return {"type": "scalars", "values": [float(v) for v in value]}
    raise BadConfig(f"cannot serialize instance value of type {type(value).__name__}")


def deserialize_value(obj: dict):
    kind = obj.get("type")
    if kind == "state":
        return state_from_json(obj)
    if kind == "subnormalized":
        return SubnormalizedOperator(matrix_from_json(obj))
    if kind == "channel":
        return KrausChannel.from_json(obj)
    if kind == "markov_spec":
        return markov_spec_from_json(obj)
    if kind == "matrix":
        return matrix_from_json(obj)
    if kind == "scalar":
        return obj["value"]
    if kind == "scalars":
        return [float(v) for v in obj["values"]]
    raise BadConfig(f"unknown serialized value type {kind!r}")


def serialize_instance(instance: dict) -> dict:
    return {name: serialize_value(value) for name, value in instance.items()}


def deserialize_instance(obj: dict) -> dict:
    return {name: deserialize_value(value) for name, value in obj.items()}
