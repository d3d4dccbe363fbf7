"""Digit-range notation for enclosures.

``[0.2593661, 0.2593682]`` is written ``0.25936_61^82``: the shared leading
digits, then the lower tail after ``_`` and the upper tail after ``^``.  The
lower bound is rounded down and the upper bound up, so the printed range
always contains the interval.
"""

import json
import math
from decimal import Decimal
from fractions import Fraction

from .interval import RealInterval

__all__ = ["format_interval", "format_enclosure", "parse_interval", "parse_enclosure", "enclosure_json"]


def _digits(n, places):
    """Integer ``n`` scaled by 10**-places as a fixed-point string."""
    sgn = "-" if n < 0 else ""
    t = str(abs(n)).rjust(places + 1, "0")
    if places == 0:
        return sgn + t
    return f"{sgn}{t[:-places]}.{t[-places:]}"


def _bounds(iv):
    if isinstance(iv, RealInterval):
        return Fraction(iv.lo), Fraction(iv.hi)
    lo, hi = iv
    return Fraction(lo), Fraction(hi)


def format_interval(iv, extra=2):
    """Shared-prefix string for a RealInterval or an exact (lo, hi) pair.

    Printing stops ``extra`` digits after the first place where the bounds
    differ; the lower bound is rounded down and the upper bound up.  With
    ``extra=None`` every digit of both (terminating) bounds is printed, so
    the string parses back to exactly the same bounds.
    A degenerate interval prints as a plain decimal.
    """
    lo, hi = _bounds(iv)
    if lo > hi:
        raise ValueError("empty interval")
    if lo == hi:
        if isinstance(iv, RealInterval):
            return repr(iv.lo)
        return str(Decimal(lo.numerator) / Decimal(lo.denominator))
    p = 0
    while math.floor(lo * 10**p) == math.floor(hi * 10**p):
        p += 1
    if extra is None:
        while (lo * 10**p).denominator != 1 or (hi * 10**p).denominator != 1:
            p += 1
    else:
        p += extra - 1
    a = _digits(math.floor(lo * 10**p), p)
    b = _digits(math.ceil(hi * 10**p), p)
    k = 0
    if len(a) == len(b):
        while k < len(a) and a[k] == b[k]:
            k += 1
    return f"{a[:k]}_{a[k:]}^{b[k:]}"


def parse_interval(s):
    """Inverse of :func:`format_interval`: exact (lo, hi) as Fractions."""
    s = s.strip()
    if "_" not in s:
        v = Fraction(Decimal(s))
        return v, v
    prefix, rest = s.split("_", 1)
    lo, hi = rest.split("^", 1)
    return Fraction(Decimal(prefix + lo)), Fraction(Decimal(prefix + hi))


def format_enclosure(box, extra=2):
    """``re + im i`` with both parts in digit-range notation."""
    if isinstance(box, RealInterval):
        return format_interval(box, extra)
    re = format_interval(box.re, extra)
    im = box.im
    if im.hi < 0:
        return f"{re} - {format_interval(-im, extra)} i"
    return f"{re} + {format_interval(im, extra)} i"


def parse_enclosure(s):
    """Exact bounds ((re_lo, re_hi), (im_lo, im_hi)) from :func:`format_enclosure` output."""
    s = s.strip()
    if not s.endswith("i"):
        raise ValueError(f"not a complex enclosure: {s!r}")
    body = s[:-1].strip()
    for sep, sgn in ((" + ", 1), (" - ", -1)):
        if sep in body:
            re, im = body.rsplit(sep, 1)
            rlo, rhi = parse_interval(re)
            ilo, ihi = parse_interval(im)
            if sgn < 0:
                ilo, ihi = -ihi, -ilo
            return (rlo, rhi), (ilo, ihi)
    raise ValueError(f"not a complex enclosure: {s!r}")


def enclosure_json(lam, box, diagnostics=None, status="ENCLOSED", error=None):
    """JSON-ready dict; floats are written with repr so they round-trip exactly."""
    out = {"lambda": {"re": repr(float(lam.real)), "im": repr(float(lam.imag))}, "status": status}
    if box is not None:
        out["m"] = {
            "re": {"lo": repr(box.re.lo), "hi": repr(box.re.hi)},
            "im": {"lo": repr(box.im.lo), "hi": repr(box.im.hi)},
        }
    if diagnostics is not None:
        d = diagnostics
        out["diagnostics"] = {
            "epsilonM": repr(d.get("epsilonM", 0.0)),
            "steps": d.get("steps", 0),
            "widths": {k: repr(v) for k, v in d.get("widths", {}).items()},
        }
        if "bridge" in d:
            out["diagnostics"]["bridge"] = {k: repr(v) for k, v in d["bridge"].items()}
    if error is not None:
        out["error"] = error
    return out


def dumps(records):
    return json.dumps(records, indent=2)
