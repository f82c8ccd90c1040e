"""Text and JSON encodings of exact reals.

Rationals become ``"p/q"`` strings.  An irrational AlgebraicReal becomes
``{"polynomial": [c0, ..., cd], "interval": ["a", "b"]}`` (constant term
first).  A field element carries its generator plus its coefficients.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .algebraic import AlgebraicReal, FieldElement, NumberField


def fraction_text(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text) -> Fraction:
    """Parse "p/q", an integer, or a terminating decimal, exactly."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not accepted where an exact value is required")
    text = str(text).strip()
    if not re.fullmatch(r"[+-]?(\d+(/\d+)?|\d*\.\d+|\d+\.\d*)", text):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def encode_real(x):
    if isinstance(x, (int, Fraction)):
        return fraction_text(x)
    if isinstance(x, AlgebraicReal):
        if x.is_rational:
            return fraction_text(x.value)
        lo, hi = x.interval
        return {"polynomial": list(x.poly), "interval": [fraction_text(lo), fraction_text(hi)]}
    if isinstance(x, FieldElement):
        if x.is_rational:
            return fraction_text(x.rational_value)
        return {
            "generator": encode_real(x.field.generator),
            "coefficients": [fraction_text(c) for c in x.coeffs],
        }
    raise TypeError(f"cannot encode {type(x).__name__}")


class DecodeContext:
    """Keeps decoded generators unique so field elements share one field."""

    def __init__(self):
        self._generators: dict[str, AlgebraicReal] = {}

    def generator(self, obj) -> AlgebraicReal:
        key = json.dumps(obj, sort_keys=True)
        if key not in self._generators:
            self._generators[key] = decode_real(obj, self)
        return self._generators[key]


def decode_real(obj, ctx: DecodeContext | None = None):
    if ctx is None:
        ctx = DecodeContext()
    if isinstance(obj, (str, int)):
        return parse_fraction(obj)
    if isinstance(obj, dict) and "coefficients" in obj:
        gen = ctx.generator(obj["generator"])
        return NumberField.of(gen)([parse_fraction(c) for c in obj["coefficients"]])
    if isinstance(obj, dict) and "polynomial" in obj:
        lo, hi = (parse_fraction(v) for v in obj["interval"])
        key = json.dumps(obj, sort_keys=True)
        if key in ctx._generators:
            return ctx._generators[key]
        x = AlgebraicReal.from_root([int(c) for c in obj["polynomial"]], lo, hi)
        ctx._generators[key] = x
        return x
    raise ValueError(f"cannot decode real from {obj!r}")


def encode_interval(iv):
    return [encode_real(iv[0]), encode_real(iv[1])]


def decode_interval(obj, ctx=None):
    return decode_real(obj[0], ctx), decode_real(obj[1], ctx)
