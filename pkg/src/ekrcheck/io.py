"""Family files, bit-vector files and report serialization.

Family file: {"kind": "sym"|"pm", "n": int, "elements": [...]}, a permutation
as its image array, a matching as an array of sorted [i, j] pairs.
Bits file: {"kind", "n", "bits": base64 of the little-endian packed truth vector}.
"""

from __future__ import annotations

import base64
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Union

import numpy as np

from .boolfn import BooleanFunction, indicator_of_family
from .domains import (
    DomainDescriptor,
    Element,
    Kind,
    PerfectMatching,
    Permutation,
    get_domain,
)
from .errors import UsageError

PathLike = Union[str, Path]


def element_to_json(x: Element) -> list:
    if x.kind is Kind.SYM:
        return list(x.images)
    return [list(e) for e in x.edges]


def element_from_json(kind: Kind, n: int, value) -> Element:
    if not isinstance(value, list):
        raise UsageError(f"element must be an array: {value!r}")
    if kind is Kind.SYM:
        if len(value) != n or not all(isinstance(v, int) for v in value):
            raise UsageError(f"permutation must be {n} integers: {value!r}")
        return Permutation(tuple(value))
    if len(value) != n or not all(isinstance(e, list) and len(e) == 2 for e in value):
        raise UsageError(f"matching must be {n} pairs: {value!r}")
    if any(e[0] >= e[1] for e in value):
        raise UsageError(f"matching pairs must be sorted: {value!r}")
    return PerfectMatching.from_edges(value, n)


def _header(obj: Any) -> tuple[Kind, int]:
    if not isinstance(obj, dict):
        raise UsageError("expected a JSON object")
    try:
        kind = Kind(obj["kind"])
        n = obj["n"]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad or missing kind/n: {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise UsageError(f"n must be a positive integer: {n!r}")
    return kind, n


def family_to_json(kind, n: int, elements: Iterable[Element]) -> dict:
    return {"kind": Kind(kind).value, "n": n, "elements": [element_to_json(x) for x in elements]}


def family_from_json(obj: Any) -> tuple[Kind, int, list[Element]]:
    kind, n = _header(obj)
    elements = obj.get("elements")
    if not isinstance(elements, list):
        raise UsageError("family file needs an 'elements' array")
    return kind, n, [element_from_json(kind, n, v) for v in elements]


def bits_to_json(f: BooleanFunction) -> dict:
    packed = np.packbits(f.truth, bitorder="little").tobytes()
    return {"kind": f.kind.value, "n": f.n, "bits": base64.b64encode(packed).decode("ascii")}


def bits_from_json(obj: Any) -> BooleanFunction:
    kind, n = _header(obj)
    descriptor = DomainDescriptor(kind, n)
    try:
        raw = base64.b64decode(obj["bits"], validate=True)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad 'bits' field: {exc}") from None
    size = descriptor.size
    if len(raw) != (size + 7) // 8:
        raise UsageError(f"'bits' holds {len(raw)} bytes, expected {(size + 7) // 8}")
    truth = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    if truth[size:].any():
        raise UsageError("padding bits beyond the domain size must be zero")
    return BooleanFunction(descriptor, truth[:size])


def load_json(path: PathLike) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def load_function(path: PathLike) -> BooleanFunction:
    """Read either file format into a BooleanFunction."""
    obj = load_json(path)
    if isinstance(obj, dict) and "bits" in obj:
        return bits_from_json(obj)
    kind, n, elements = family_from_json(obj)
    return indicator_of_family(get_domain(kind, n), elements)


def write_family(path: PathLike, kind, n: int, elements: Iterable[Element]) -> None:
    Path(path).write_text(dumps(family_to_json(kind, n, elements)) + "\n")


def fraction_text(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def certificate_to_json(certificate) -> list:
    return [list(p) for p in sorted(certificate)]


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, no whitespace variation."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
