"""JSON interchange for series and related values.

Integers inside rationals are carried as decimal strings so round trips
are bit-exact; emission is canonical (sorted keys, fixed indentation), so
re-emitting a re-parsed document reproduces it byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import MalformedInputError
from .numberfield import RATIONAL, CyclotomicElement, FieldTag, euler_phi
from .qseries import QExpansion


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedInputError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text.replace("−", "-").strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"bad rational {text!r}: {exc}") from None


def field_to_obj(tag: FieldTag) -> dict:
    if tag.is_rational_field:
        return {"kind": "rational"}
    return {"kind": "cyclotomic", "conductor": tag.conductor}


def field_from_obj(obj) -> FieldTag:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise MalformedInputError(f"bad field object {obj!r}")
    if obj["kind"] == "rational":
        return RATIONAL
    if obj["kind"] == "cyclotomic":
        m = obj.get("conductor")
        if not isinstance(m, int) or m < 1:
            raise MalformedInputError(f"bad conductor {m!r}")
        return FieldTag.cyclotomic(m)
    raise MalformedInputError(f"unknown field kind {obj['kind']!r}")


def element_to_obj(value, tag: FieldTag):
    if tag.is_rational_field:
        return format_rational(value)
    value = tag.coerce(value)
    return [format_rational(c) for c in value.coords]


def element_from_obj(obj, tag: FieldTag):
    if tag.is_rational_field:
        return parse_rational(obj)
    if isinstance(obj, (str, int)):
        return CyclotomicElement.from_rational(tag.conductor, parse_rational(obj))
    if not isinstance(obj, list):
        raise MalformedInputError(f"bad cyclotomic coefficient {obj!r}")
    if len(obj) != euler_phi(tag.conductor):
        raise MalformedInputError(
            f"expected {euler_phi(tag.conductor)} coordinates, got {len(obj)}"
        )
    return CyclotomicElement(tag.conductor, [parse_rational(c) for c in obj])


def series_to_obj(f: QExpansion) -> dict:
    return {
        "level": f.level,
        "lead": f.lead,
        "precision": f.precision,
        "field": field_to_obj(f.field),
        "coeffs": [element_to_obj(c, f.field) for c in f.coeffs],
    }


def series_from_obj(obj) -> QExpansion:
    if not isinstance(obj, dict):
        raise MalformedInputError("series object must be a JSON object")
    missing = {"level", "lead", "precision", "field", "coeffs"} - set(obj)
    if missing:
        raise MalformedInputError(f"series object missing keys: {sorted(missing)}")
    level, lead, precision = obj["level"], obj["lead"], obj["precision"]
    if not all(isinstance(v, int) for v in (level, lead, precision)):
        raise MalformedInputError("level, lead and precision must be integers")
    tag = field_from_obj(obj["field"])
    coeffs = [element_from_obj(c, tag) for c in obj["coeffs"]]
    if len(coeffs) != precision - lead:
        raise MalformedInputError(
            f"{len(coeffs)} coefficients do not fill the window [{lead}, {precision})"
        )
    return QExpansion(level, lead, coeffs, precision, tag)


def prefix_from_obj(obj, tag: FieldTag):
    if isinstance(obj, dict) and "prefix" in obj:
        obj = obj["prefix"]
    if not isinstance(obj, list):
        raise MalformedInputError("prefix file must hold a JSON array of coefficients")
    return [element_from_obj(c, tag) for c in obj]
