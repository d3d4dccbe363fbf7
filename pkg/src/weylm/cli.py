"""Batch command line front end.

    weylm --alpha 1 --lambda 1+1i --lambda -1+1i --X 10
    weylm --table T1 --jobs 4
    weylm --alpha 1/2 --lambda 1+1i --X 10 --bridge-eps 0.000015625

Exit status: 0 when every enclosure was certified, 2 when any FAILED,
1 on a usage error.  A certified box that misses a reference row is reported
as a mismatch but does not count as FAILED.
"""

import argparse
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .asymptotic import ProblemSpec
from .errors import EnclosureError
from .formatting import dumps, enclosure_json, format_enclosure
from .interval import ComplexBox, RealInterval
from .ivp import StepPlan
from .pipeline import compute_m
from .refdata import TABLE_IDS, load_rows, table_meta

__all__ = ["RunConfig", "parse_lambda", "build_config", "run_batch", "main"]

_NUM = r"[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?|[0-9]+\."
_LAMBDA = re.compile(rf"^(?:(?P<re>[+-]?(?:{_NUM}))(?=[+-]))?(?P<im>[+-]?(?:{_NUM})?)i$")


class UsageError(ValueError):
    pass


def parse_lambda(text):
    """'a+bi' -> (re, im) decimal strings.  Accepts 'i', '-2i', '1e-4i', '3-0.5i'."""
    s = text.strip().replace(" ", "").replace("j", "i")
    m = _LAMBDA.match(s)
    if not m:
        raise UsageError(f"--lambda {text!r}: expected a+bi with b != 0")
    re_s = m.group("re") or "0"
    im_s = m.group("im")
    if im_s in ("", "+"):
        im_s = "1"
    elif im_s == "-":
        im_s = "-1"
    if float(im_s) == 0.0:
        raise UsageError(f"--lambda {text!r}: imaginary part must be nonzero")
    return re_s.lstrip("+"), im_s.lstrip("+")


def lambda_box(re_s, im_s):
    return ComplexBox(RealInterval(re_s), RealInterval(im_s))


@dataclass
class RunConfig:
    alpha: Fraction
    sign: int
    lambdas: list
    X: float
    M: int = 6
    order: int = 15
    steps: list = field(default_factory=list)
    bridge_eps: float = None
    fmt: str = "text"
    jobs: int = 1
    table: str = None
    references: list = None

    def validate(self):
        if not self.lambdas:
            raise UsageError("no --lambda given (or use --table)")
        if self.alpha <= 0:
            raise UsageError("--alpha must be positive")
        if not self.X > 0:
            raise UsageError("--X must be positive")
        if self.M < 1:
            raise UsageError("--stages must be at least 1")
        if self.order < 2:
            raise UsageError("--order must be at least 2")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        smooth = self.alpha.denominator == 1
        if not smooth and self.bridge_eps is None:
            self.bridge_eps = 0.000015625
        if self.bridge_eps is not None and not self.bridge_eps > 0:
            raise UsageError("--bridge-eps must be positive")
        try:
            self.plan()
        except ValueError as e:
            raise UsageError(f"--step: {e}") from e
        return self

    def plan(self):
        smooth = self.alpha.denominator == 1
        final = 0.0 if smooth else self.bridge_eps
        if not self.steps:
            if smooth:
                return StepPlan.standard(self.X, self.alpha, self.order)
            coarse = 0.03125
            return StepPlan(self.X, [(coarse, -coarse), (final, -final)], self.order)
        phases = []
        for i, (h, end) in enumerate(self.steps):
            if end is None:
                if i != len(self.steps) - 1:
                    raise ValueError("only the last --step may omit @END")
                end = final
            phases.append((end, -abs(h)))
        if phases[-1][0] != final:
            raise ValueError(f"schedule must end at {final}")
        return StepPlan(self.X, phases, self.order)


def _parse_step(text):
    h, _, end = text.partition("@")
    try:
        return float(h), (float(end) if end else None)
    except ValueError:
        raise UsageError(f"--step {text!r}: expected H or H@END") from None


def _parser():
    p = argparse.ArgumentParser(prog="weylm", description="Rigorous enclosures of the Weyl m-function for q = +-x**alpha.")
    p.add_argument("--alpha", help="exponent, e.g. 1, 2, 1/2")
    p.add_argument("--sign", choices=["+", "-"], default="-", help="sign of the potential (default -)")
    p.add_argument("--lambda", dest="lambdas", action="append", default=[], metavar="A+BI", help="spectral parameter (repeatable)")
    p.add_argument("--X", type=float, help="matching point (default 10)")
    p.add_argument("--stages", type=int, default=6, help="diagonalization sweeps M (default 6)")
    p.add_argument("--order", type=int, default=15, help="Taylor order r (default 15)")
    p.add_argument("--step", dest="steps", action="append", default=[], metavar="H[@END]", help="step phase (repeatable)")
    p.add_argument("--bridge-eps", type=float, help="stop point for non-smooth potentials")
    p.add_argument("--table", choices=TABLE_IDS, help="run a shipped reference table")
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return p


def _glue_values(argv):
    # argparse takes "-1+1i" for an option; bind such values with "="
    out, it = [], iter(argv)
    for a in it:
        if a in ("--lambda", "--step", "--alpha"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def build_config(argv):
    args = _parser().parse_args(_glue_values(list(argv)))
    refs = None
    if args.table:
        meta = table_meta(args.table)
        rows = load_rows(args.table)
        alpha = meta["alpha"]
        sign = meta["sign"]
        X = meta["X"] if args.X is None else args.X
        lams = [(r.lam_re, r.lam_im) for r in rows] if not args.lambdas else [parse_lambda(s) for s in args.lambdas]
        refs = rows if not args.lambdas else None
        steps = [_parse_step(s) for s in args.steps]
        if not steps and "schedule" in meta:
            steps = [(float(h), float(e)) for e, h in meta["schedule"]]
        beps = args.bridge_eps if args.bridge_eps is not None else meta.get("bridge_eps")
    else:
        if args.alpha is None:
            raise UsageError("--alpha is required without --table")
        try:
            alpha = Fraction(args.alpha)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--alpha {args.alpha!r} is not a rational number") from None
        sign = -1 if args.sign == "-" else 1
        X = 10.0 if args.X is None else args.X
        lams = [parse_lambda(s) for s in args.lambdas]
        steps = [_parse_step(s) for s in args.steps]
        beps = args.bridge_eps
    cfg = RunConfig(alpha, sign, lams, X, args.stages, args.order, steps, beps, args.fmt, args.jobs, args.table, refs)
    return cfg.validate()


def _one(task):
    cfg, (re_s, im_s) = task
    lam = lambda_box(re_s, im_s)
    try:
        spec = ProblemSpec(cfg.alpha, cfg.sign, lam, cfg.X, M=cfg.M)
        res = compute_m(spec, cfg.plan(), cfg.bridge_eps, cfg.order)
        return {"ok": True, "box": res.box, "diag": res.diagnostics}
    except EnclosureError as e:
        return {"ok": False, "error": f"{type(e).__name__}: {e}"}


def run_batch(cfg):
    """One record per lambda, in input order."""
    tasks = [(cfg, lam) for lam in cfg.lambdas]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_one, tasks))
    else:
        results = [_one(t) for t in tasks]
    records = []
    for i, ((re_s, im_s), res) in enumerate(zip(cfg.lambdas, results)):
        rec = {"lambda": (re_s, im_s), **res}
        if cfg.references is not None and res["ok"]:
            rec["reference"] = cfg.references[i]
            rec["match"] = res["box"].intersects(cfg.references[i].box())
        records.append(rec)
    return records


def _lam_text(re_s, im_s):
    sgn = "-" if im_s.startswith("-") else "+"
    return f"{re_s}{sgn}{im_s.lstrip('-')}i"


def render(records, fmt):
    if fmt == "json":
        out = []
        for r in records:
            lam = complex(float(r["lambda"][0]), float(r["lambda"][1]))
            if r["ok"]:
                d = enclosure_json(lam, r["box"], r["diag"])
                if "match" in r:
                    d["reference_intersects"] = r["match"]
            else:
                d = enclosure_json(lam, None, status="FAILED", error=r["error"])
            out.append(d)
        return dumps(out)
    lines = []
    for r in records:
        lam = _lam_text(*r["lambda"])
        if not r["ok"]:
            lines.append(f"lambda = {lam}: FAILED ({r['error']})")
            continue
        d = r["diag"]
        line = f"lambda = {lam}: m in {format_enclosure(r['box'])}   [width {r['box'].width:.1e}, {d['steps']} steps, {d['seconds']:.2f}s]"
        if "match" in r:
            line += "  reference: " + ("ok" if r["match"] else "MISMATCH")
        lines.append(line)
    return "\n".join(lines)


def main(argv=None):
    try:
        cfg = build_config(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"weylm: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    records = run_batch(cfg)
    print(render(records, cfg.fmt))
    return 0 if all(r["ok"] for r in records) else 2


if __name__ == "__main__":
    sys.exit(main())
