"""Published reference enclosures shipped with the package."""

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .interval import ComplexBox, RealInterval

__all__ = ["ReferenceRow", "load_rows", "table_meta", "data_sha256", "TABLE_IDS"]

TABLE_IDS = ("T1", "T2", "T3", "S5a", "S5b")
_NAME = "reference_tables.json"


def _raw_bytes():
    return resources.files("weylm").joinpath("data", _NAME).read_bytes()


def data_sha256():
    return hashlib.sha256(_raw_bytes()).hexdigest()


def _load():
    return json.loads(_raw_bytes().decode("utf-8"))


@dataclass(frozen=True)
class ReferenceRow:
    table: str
    lam_re: str
    lam_im: str
    m_re: tuple
    m_im: tuple
    notation: str

    @property
    def lam(self):
        """Tight box around the decimal spectral parameter."""
        return ComplexBox(RealInterval(self.lam_re), RealInterval(self.lam_im))

    @property
    def lam_complex(self):
        return complex(float(self.lam_re), float(self.lam_im))

    @property
    def label(self):
        re, im = self.lam_re, self.lam_im
        if re == "0":
            return f"{im}i" if im != "1" else "i"
        return f"{re}+{im}i"

    def box(self):
        """Outward-rounded ComplexBox of the published enclosure."""
        return ComplexBox(RealInterval(self.m_re[0], self.m_re[1]), RealInterval(self.m_im[0], self.m_im[1]))

    def exact(self):
        """Published bounds as exact fractions ((re_lo, re_hi), (im_lo, im_hi))."""
        return (tuple(Fraction(v) for v in self.m_re), tuple(Fraction(v) for v in self.m_im))

    def width(self):
        (a, b), (c, d) = self.exact()
        return float(max(b - a, d - c))


def load_rows(table=None):
    rows = []
    for r in _load()["rows"]:
        if table is not None and r["table"] != table:
            continue
        rows.append(ReferenceRow(
            r["table"], r["lambda"]["re"], r["lambda"]["im"],
            (r["m_re"]["lo"], r["m_re"]["hi"]), (r["m_im"]["lo"], r["m_im"]["hi"]),
            r["notation"],
        ))
    return rows


def table_meta(table):
    """Problem parameters of a table: alpha (Fraction), sign, X (float), and extras."""
    m = dict(_load()["tables"][table])
    m["alpha"] = Fraction(m["alpha"])
    m["X"] = float(m["X"])
    if "epsilonM" in m:
        m["epsilonM"] = float(m["epsilonM"])
    if "bridge_eps" in m:
        m["bridge_eps"] = float(m["bridge_eps"])
    return m
