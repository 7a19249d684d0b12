"""JSON network files.

A file holds ``power``, ``source_gains`` (N numbers) and
``relay_dest_gains`` (L rows of N numbers), plus an optional ``name``::

    {"name": "diamond", "power": 1.0,
     "source_gains": [2.0, 1.4142135623730951],
     "relay_dest_gains": [[2.0, 1.4142135623730951], [2.0, 0.0]]}
"""
from __future__ import annotations

import json
import math
from numbers import Real

from relaycap.core import Network
from relaycap.errors import RelayCapError


class NetworkFileError(RelayCapError, ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + where)


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _finite_float(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"number {text} overflows to infinity")
    return v


def _is_number(x) -> bool:
    return isinstance(x, Real) and not isinstance(x, bool)


def loads(text: str) -> Network:
    try:
        doc = json.loads(text, parse_constant=_reject_constant, parse_float=_finite_float,
                         parse_int=_finite_float)
    except json.JSONDecodeError as e:
        raise NetworkFileError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    except ValueError as e:
        raise NetworkFileError(str(e)) from None
    if not isinstance(doc, dict):
        raise NetworkFileError("top level must be an object", 1, 1)
    missing = [k for k in ("power", "source_gains", "relay_dest_gains") if k not in doc]
    if missing:
        raise NetworkFileError(f"missing field(s): {', '.join(missing)}")
    unknown = set(doc) - {"name", "power", "source_gains", "relay_dest_gains"}
    if unknown:
        raise NetworkFileError(f"unknown field(s): {', '.join(sorted(unknown))}")

    power = doc["power"]
    if not _is_number(power) or not power > 0:
        raise NetworkFileError("power must be a positive number")
    g = doc["source_gains"]
    if not isinstance(g, list) or not g or not all(_is_number(x) for x in g):
        raise NetworkFileError("source_gains must be a nonempty array of numbers")
    rows = doc["relay_dest_gains"]
    if not isinstance(rows, list) or not rows:
        raise NetworkFileError("relay_dest_gains must be a nonempty array of arrays")
    for d, row in enumerate(rows):
        if not isinstance(row, list) or not all(_is_number(x) for x in row):
            raise NetworkFileError(f"relay_dest_gains[{d}] must be an array of numbers")
        if len(row) != len(g):
            raise NetworkFileError(
                f"relay_dest_gains[{d}] has {len(row)} entries, expected {len(g)} (one per relay)")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise NetworkFileError("name must be a string")
    return Network(float(power), [float(x) for x in g], [[float(x) for x in r] for r in rows],
                   name=name)


def load(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(net: Network) -> str:
    """Serialize with shortest round-trip float reprs."""
    doc = {}
    if net.name is not None:
        doc["name"] = net.name
    doc["power"] = net.power
    doc["source_gains"] = [float(x) for x in net.source_gains]
    doc["relay_dest_gains"] = [[float(x) for x in row] for row in net.relay_dest_gains]
    return json.dumps(doc, indent=2) + "\n"


def dump(net: Network, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(net))
