import json
import random
from fractions import Fraction as F

import pytest

from weylm.formatting import enclosure_json, format_enclosure, format_interval, parse_enclosure, parse_interval
from weylm.interval import ComplexBox, RealInterval
from weylm.refdata import load_rows


def test_digit_range_example():
    assert format_interval((F("0.2593661"), F("0.2593682"))) == "0.25936_61^82"


def test_float_box_rounds_outward():
    s = format_interval(RealInterval(0.2593661, 0.2593682))
    lo, hi = parse_interval(s)
    assert lo <= F(0.2593661) and hi >= F(0.2593682)
    assert s.startswith("0.25936_")


def test_point_prints_plain():
    assert format_interval(RealInterval(0.1)) == "0.1"
    # a point prints as the shortest repr, which reads back to the same double
    lo, hi = parse_interval("0.1")
    assert lo == hi == F("0.1") and float(lo) == 0.1


def test_sign_change_has_empty_prefix():
    s = format_interval(RealInterval(-0.01, 0.02))
    assert s.startswith("_-")
    lo, hi = parse_interval(s)
    assert lo <= F(-0.01) and hi >= F(0.02)


def test_negative_imaginary_part():
    b = ComplexBox(RealInterval(0.5, 0.6), RealInterval(-0.3, -0.2))
    s = format_enclosure(b)
    assert " - " in s
    (rl, rh), (il, ih) = parse_enclosure(s)
    assert il <= F(-0.3) and ih >= F(-0.2)


@pytest.mark.parametrize("seed", range(5))
def test_round_trip_property(seed):
    rng = random.Random(seed)
    for _ in range(300):
        c = rng.uniform(-5, 5)
        w = 10 ** rng.uniform(-15, 0)
        iv = RealInterval(c, c + w)
        extra = rng.randint(1, 4)
        s = format_interval(iv, extra)
        lo, hi = parse_interval(s)
        prefix, rest = s.split("_")
        lo_str = prefix + rest.split("^")[0]
        places = len(lo_str.split(".")[1]) if "." in lo_str else 0
        ulp = F(1, 10**places)
        assert lo <= F(iv.lo) and F(iv.hi) <= hi
        assert F(iv.lo) - ulp <= lo and hi <= F(iv.hi) + ulp


def test_exact_mode_round_trip():
    rng = random.Random(9)
    for _ in range(200):
        a = rng.uniform(-3, 3)
        iv = RealInterval(a, a + rng.uniform(0, 1e-6))
        assert parse_interval(format_interval(iv, None)) == (F(iv.lo), F(iv.hi))


def test_reference_notation_parses_to_stored_bounds():
    rows = load_rows()
    assert len(rows) == 38
    for r in rows:
        (rl, rh), (il, ih) = parse_enclosure(r.notation)
        assert ((rl, rh), (il, ih)) == r.exact(), r.notation


def test_short_prefix_corner():
    # bounds differing in the first decimal place leave only "0." as prefix
    assert format_interval((F("0.59986"), F("0.60008")), 3) == "0._599^601"


def test_json_is_exact():
    b = ComplexBox(RealInterval(0.1, 0.30000000000000004), RealInterval(-1e-300, 2.5))
    d = enclosure_json(1 + 1j, b, {"epsilonM": 1e-9, "steps": 320, "widths": {"m": 1e-10}})
    d = json.loads(json.dumps(d))
    assert float(d["m"]["re"]["hi"]) == 0.30000000000000004
    assert float(d["m"]["im"]["lo"]) == -1e-300
    assert set(d) >= {"lambda", "m", "diagnostics"}
    assert set(d["diagnostics"]) >= {"epsilonM", "steps", "widths"}
