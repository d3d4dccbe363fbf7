from fractions import Fraction as F

import pytest

from weylm.refdata import TABLE_IDS, data_sha256, load_rows, table_meta

CHECKSUM = "f15d50385c6923b054096e21342d9b78fe7b8be652174b9ed8df722534b7b2fd"


def test_checksum():
    assert data_sha256() == CHECKSUM


def test_row_counts():
    assert len(load_rows()) == 38
    for t in ("T1", "T2", "T3"):
        assert len(load_rows(t)) == 12
    assert len(load_rows("S5a")) == len(load_rows("S5b")) == 1


@pytest.mark.parametrize("table", TABLE_IDS)
def test_bounds_ordered_and_boxes_outward(table):
    for r in load_rows(table):
        (a, b), (c, d) = r.exact()
        assert a <= b and c <= d
        box = r.box()
        assert F(box.re.lo) <= a and F(box.re.hi) >= b
        assert F(box.im.lo) <= c and F(box.im.hi) >= d
        assert r.lam_complex.imag != 0


def test_lambda_box_is_tight():
    row = [r for r in load_rows("T3") if r.lam_re == "0.1"][0]
    lam = row.lam
    assert lam.re.contains(F("0.1")) and lam.im.contains(F("0.1"))
    assert lam.re.width <= 2e-17


def test_meta():
    assert table_meta("T1")["alpha"] == 1 and table_meta("T1")["X"] == 10.0
    assert table_meta("T2")["alpha"] == 2
    assert table_meta("T3")["X"] == 40.0
    assert table_meta("S5a")["alpha"] == F(1, 2)
    assert table_meta("S5b")["alpha"] == F(3, 2)
    assert table_meta("S5b")["bridge_eps"] == 0.000015625
    for t in ("T1", "T2", "T3"):
        assert 0 < table_meta(t)["epsilonM"] < 1e-7


def test_unknown_table():
    assert load_rows("T9") == []
