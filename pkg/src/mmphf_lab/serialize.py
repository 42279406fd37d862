"""Serialization helpers: exact rationals as "p/q", huge integers as decimal.

All artifacts emit rationals as "p/q" strings (never floats) and
arbitrary-precision integers as decimal strings.  Monte-Carlo estimates
are the only sanctioned floats and always travel with their confidence
interval.
"""

import sys
from fractions import Fraction


def frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_frac(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def int_str(x: int) -> str:
    """Decimal string of an arbitrary-precision integer.

    Lifts the interpreter's int-to-str digit guard when the value is too
    wide for the default limit.
    """
    limit_fn = getattr(sys, "get_int_max_str_digits", None)
    if limit_fn is not None:
        # digits ~= bits * log10(2); pad generously
        need = int(x.bit_length() * 0.302) + 16
        if need > limit_fn():
            sys.set_int_max_str_digits(need)
    return str(x)
