"""
BasisDocument: the JSON form of a BasisSet.

{
  "construction": {"kind": ..., "params": {...}, "children": [...]},
  "d": 3,
  "d_prime": 10,
  "format_version": "1",
  "states": [{"coeffs": [[re, im], ...], "label": [l, j, n]}, ...]
}

coeffs run in row-major (k, l) order. Keys are sorted and floats use Python's
shortest round-trip repr, so save -> load -> save is byte-identical.
"""

import json
import math
from typing import Any, Dict, List, Mapping

import numpy as np

from .constructions import PROVENANCE_KINDS, BasisSet, Provenance
from .correspondence import PureState


FORMAT_VERSION = "1"


class MalformedDocumentError(ValueError):
    """The input is not a readable, schema-valid BasisDocument."""


def basis_to_document(basis: BasisSet) -> Dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "d": basis.d,
        "d_prime": basis.d_prime,
        "construction": basis.provenance.to_dict(),
        "states": [
            {
                "label": list(label),
                "coeffs": [[float(c.real), float(c.imag)] for c in state.vector],
            }
            for state, label in zip(basis.states, basis.labels)
        ],
    }


def dumps_basis(basis: BasisSet) -> str:
    return json.dumps(basis_to_document(basis), indent=2, sort_keys=True) + "\n"


def save_basis(basis: BasisSet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_basis(basis))


def _require_int(doc: Mapping[str, Any], key: str) -> int:
    value = doc.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedDocumentError(f"field {key!r} must be an integer (got {value!r})")
    return value


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedDocumentError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise MalformedDocumentError(f"{where}: non-finite value {value!r}")
    return float(value)


def _provenance(data: Any) -> Provenance:
    if not isinstance(data, dict) or not isinstance(data.get("kind"), str):
        raise MalformedDocumentError("field 'construction' must be an object with a string 'kind'")
    if data["kind"] not in PROVENANCE_KINDS:
        raise MalformedDocumentError(
            f"unknown construction kind {data['kind']!r}; expected one of {', '.join(PROVENANCE_KINDS)}"
        )
    if not isinstance(data.get("params", {}), dict) or not isinstance(data.get("children", []), list):
        raise MalformedDocumentError("construction 'params' must be an object and 'children' a list")
    for child in data.get("children", []):
        _provenance(child)
    return Provenance.from_dict(data)


def document_to_basis(doc: Any) -> BasisSet:
    """Validate the schema and build the BasisSet; states are not normalized or checked."""
    if not isinstance(doc, dict):
        raise MalformedDocumentError("document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise MalformedDocumentError(
            f"unsupported format_version {doc.get('format_version')!r} (expected {FORMAT_VERSION!r})"
        )
    d = _require_int(doc, "d")
    d_prime = _require_int(doc, "d_prime")
    if not 1 <= d <= d_prime:
        raise MalformedDocumentError(f"need 1 <= d <= d' (got d={d}, d'={d_prime})")
    provenance = _provenance(doc.get("construction"))

    raw_states = doc.get("states")
    if not isinstance(raw_states, list):
        raise MalformedDocumentError("field 'states' must be a list")
    states: List[PureState] = []
    labels = []
    for i, entry in enumerate(raw_states):
        if not isinstance(entry, dict):
            raise MalformedDocumentError(f"state {i} must be an object")
        label = entry.get("label")
        if not isinstance(label, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in label):
            raise MalformedDocumentError(f"state {i}: 'label' must be a list of integers")
        coeffs = entry.get("coeffs")
        if not isinstance(coeffs, list) or len(coeffs) != d * d_prime:
            raise MalformedDocumentError(f"state {i}: 'coeffs' must hold d*d' = {d * d_prime} [re, im] pairs")
        values = np.zeros(d * d_prime, dtype=np.complex128)
        for idx, pair in enumerate(coeffs):
            if not isinstance(pair, list) or len(pair) != 2:
                raise MalformedDocumentError(f"state {i}, coefficient {idx}: expected [re, im]")
            values[idx] = complex(
                _number(pair[0], f"state {i}, coefficient {idx}"),
                _number(pair[1], f"state {i}, coefficient {idx}"),
            )
        states.append(PureState.unchecked(d, d_prime, values))
        labels.append(tuple(label))

    try:
        return BasisSet(d, d_prime, tuple(states), tuple(labels), provenance)
    except ValueError as exc:
        raise MalformedDocumentError(str(exc)) from None


def loads_basis(text: str) -> BasisSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"invalid JSON: {exc}") from None
    return document_to_basis(doc)


def load_basis(path: str) -> BasisSet:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise MalformedDocumentError(f"cannot read {path}: {exc.strerror or exc}") from None
    return loads_basis(text)
