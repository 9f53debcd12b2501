"""JSON state-input documents.

A document is an object with exactly one of:

* ``"matrix"``: 4x4 array of [re, im] pairs, row-major,
* ``"fano"``: ``{"a": [3], "b": [3], "T": [3x3]}``,
* ``"named"``: ``{"werner": w}`` or ``{"bell": "phi+"|"phi-"|"psi+"|"psi-"}``
  or ``{"canonical": {"a": [3], "b": [3], "c": [3]}}``.
"""
from __future__ import annotations

import json

import numpy as np

from .states import DensityMatrix, FanoForm, bell_state, fano_compose, validate_density, werner_state

_FORMS = ("matrix", "fano", "named")


def state_from_document(doc: dict) -> DensityMatrix:
    """Parse and validate a state document."""
    if not isinstance(doc, dict):
        raise ValueError("state document must be a JSON object")
    present = [k for k in _FORMS if k in doc]
    if len(present) != 1:
        raise ValueError(f"state document must have exactly one of {_FORMS}, found {present}")
    form = present[0]
    body = doc[form]
    if form == "matrix":
        arr = np.asarray(body, dtype=np.float64)
        if arr.shape != (4, 4, 2):
            raise ValueError(f'"matrix" must be 4x4 of [re, im] pairs, got shape {arr.shape}')
        return validate_density(arr[..., 0] + 1j * arr[..., 1])
    if form == "fano":
        if not isinstance(body, dict) or set(body) != {"a", "b", "T"}:
            raise ValueError('"fano" must be an object with keys "a", "b", "T"')
        return fano_compose(FanoForm(a=body["a"], b=body["b"], T=body["T"]))
    if not isinstance(body, dict) or len(body) != 1:
        raise ValueError('"named" must be an object with exactly one key')
    (name, value), = body.items()
    if name == "werner":
        return werner_state(float(value))
    if name == "bell":
        return bell_state(str(value))
    if name == "canonical":
        if not isinstance(value, dict) or set(value) != {"a", "b", "c"}:
            raise ValueError('"canonical" must be an object with keys "a", "b", "c"')
        return fano_compose(FanoForm(a=value["a"], b=value["b"], T=np.diag(np.asarray(value["c"], dtype=np.float64))))
    raise ValueError(f'unknown named state {name!r}; expected "werner", "bell" or "canonical"')


def state_to_document(rho: DensityMatrix) -> dict:
    """Dump a state in the "matrix" document form ([re, im] pairs)."""
    m = rho.matrix
    pairs = np.stack([m.real, m.imag], axis=-1)
    return {"matrix": pairs.tolist()}


def load_state_file(path: str) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_document(json.load(fh))
