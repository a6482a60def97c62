"""JSON encoding of rationals, instances and price files."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .bounds import to_decimal
from .core import Instance, instance_to_dict, validate_instance


def rational_to_json(q) -> dict:
    q = Fraction(q)
    if q.denominator == 1:
        text = str(q.numerator)
    else:
        text = format(to_decimal(q).normalize(), "f")
    return {"num": q.numerator, "den": q.denominator, "decimal": text}


def rational_from_json(value) -> Fraction:
    """Accept ``{"num", "den"}`` objects, integers, or ``"p/q"`` strings."""
    if isinstance(value, dict):
        return Fraction(value["num"], value.get("den", 1))
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return Fraction(value)
    raise ValueError(f"cannot read a rational from {value!r}")


def read_instance(path: Union[str, Path]) -> Instance:
    return validate_instance(json.loads(Path(path).read_text()))


def write_instance(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n")


def prices_to_json(prices) -> dict:
    return {"prices": [rational_to_json(p) for p in prices]}


def read_prices(path: Union[str, Path]) -> tuple[Fraction, ...]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data["prices"]
    return tuple(rational_from_json(v) for v in data)
