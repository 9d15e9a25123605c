"""Command line front end: ``qtwist qbern | lvalue | verify``.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 precision exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from qtwist.errors import DomainError, InsufficientLevel, PrecisionError, UnsupportedOrder, VerificationFailure
from qtwist.padic import PadicContext, PadicNumber, q_admissible

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_PRECISION = 0, 1, 2, 3

_Q_POWER = re.compile(r"^1\+p(?:\^(\d+))?$")
_Q_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_q(expr: str, ctx: PadicContext) -> PadicNumber:
    """``1+p^k`` (``1+p`` meaning k = 1) or an exact rational ``a/b`` with v(q - 1) >= 1."""
    s = expr.replace(" ", "")
    m = _Q_POWER.match(s)
    if m:
        k = int(m.group(1) or 1)
        if k < 1:
            raise DomainError("q = 1+p^k needs k >= 1")
        q = ctx(1 + ctx.p ** k)
    else:
        m = _Q_RATIONAL.match(s)
        if not m:
            raise DomainError(f"cannot parse q={expr!r}; use '1+p^k' or 'a/b'")
        den = int(m.group(2) or 1)
        if den == 0:
            raise DomainError("zero denominator in q")
        q = ctx(Fraction(int(m.group(1)), den))
    if not q_admissible(q):
        raise DomainError(f"q={expr} violates v_p(q-1) >= {ctx.min_qv}")
    return q


def parse_s(expr: str):
    s = Fraction(expr)
    return int(s) if s.denominator == 1 else s


@dataclass
class RunConfig:
    command: str
    p: int = 3
    M: int = 30
    q: str = "1+p"
    h: int = 1
    xi_order: int = 1
    chi_modulus: int = 1
    chi_index: int = 0
    alpha: int = 2
    N: int = 3
    D: int = 30
    n: int = 1
    x: str = "0"
    s: Optional[str] = None
    m: Optional[int] = None
    branch: int = 0
    mazur: str = "weighted"
    suite: Optional[str] = None
    grid: Optional[str] = None
    format: str = "json"
    timing: bool = True

    def validate(self):
        if self.M < 4:
            raise DomainError("precision M must be >= 4")
        if self.N < 1:
            raise InsufficientLevel("level N must be >= 1")
        if self.D < 1:
            raise DomainError("formal-series degree D must be >= 1")
        if self.chi_modulus < 1:
            raise DomainError("chi modulus must be >= 1")
        if self.xi_order < 1:
            raise DomainError("xi order must be >= 1")
        if self.command == "lvalue" and (self.s is None) == (self.m is None):
            raise DomainError("lvalue needs exactly one of --s or --m")
        if self.m is not None and self.m < 1:
            raise DomainError("--m must be >= 1")
        return self


def _build(cfg: RunConfig):
    from qtwist.characters import character
    from qtwist.cyclotomic import tower_for_orders

    ctx = PadicContext(cfg.p, cfg.M)
    chi = character(cfg.chi_modulus, cfg.chi_index)
    if cfg.chi_modulus % cfg.p == 0:
        raise DomainError(f"chi modulus {cfg.chi_modulus} must be prime to p={cfg.p}")
    tower = tower_for_orders(ctx, cfg.xi_order, chi.order)
    xi = tower.root_of_unity(cfg.xi_order)
    return ctx, chi, tower, xi, parse_q(cfg.q, ctx)


def _value_record(name, v) -> dict:
    rec = {"name": name, "value": v.render(), "precision": str(v.prec)}
    try:
        rec["valuation"] = str(v.valuation())
    except (PrecisionError, ValueError):
        rec["valuation"] = None
    return rec


def cmd_qbern(cfg: RunConfig) -> tuple[dict, int]:
    from qtwist.qbernoulli import QSetting, beta_generalized

    ctx, chi, tower, xi, q = _build(cfg)
    S = QSetting(tower, q, cfg.h, chi.l)
    x = Fraction(cfg.x)
    x = int(x) if x.denominator == 1 else x
    values = [_value_record(f"beta_{n}", beta_generalized(n, x, S, xi, chi)) for n in range(cfg.n + 1)]
    return {"values": values, "defects": [], "tower": tower.metadata()}, EXIT_OK


def cmd_lvalue(cfg: RunConfig) -> tuple[dict, int]:
    from qtwist.lfunction import LSetting, interpolation_check, l_value_at_negative, l_value_integral, l_value_series

    ctx, chi, tower, xi, q = _build(cfg)
    st = LSetting(tower, q, cfg.h, chi, xi, cfg.alpha, cfg.N, cfg.branch, cfg.mazur)
    s = 1 - cfg.m if cfg.m is not None else parse_s(cfg.s)
    ser = l_value_series(s, st, cfg.N)
    itg = l_value_integral(s, st, cfg.N)
    values = [_value_record("series", ser), _value_record("integral", itg)]
    defects = [{"pair": "series-integral", "valuation": str(ser.agreement(itg))}]
    out = {"values": values, "defects": defects, "tower": tower.metadata(), "lsetting": st.metadata()}
    if cfg.m is not None:
        rep = interpolation_check(cfg.m, st, range(2, max(cfg.N, 3) + 1), strict=False)
        if rep.sign is not None:
            closed = l_value_at_negative(cfg.m, st, rep.sign, rep.omega)
            values.append(_value_record("closed_form", closed))
            defects.append({"pair": "series-closed_form", "valuation": str(ser.agreement(closed))})
        out["sign"] = rep.as_dict()
        if rep.sign is None:
            return out, EXIT_FAIL
    return out, EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    from qtwist.suites import load_grid, run_suite

    grid = load_grid(cfg.grid)
    if cfg.suite == "formal-series":
        grid["formal-series"]["D"] = cfg.D
    res = run_suite(cfg.suite, grid, cfg.M)
    out = {
        "values": [],
        "defects": [c.as_dict() for c in res.cases],
        "tower": None,
        "suite": res.name,
        "ok": res.ok,
    }
    if res.probes:
        out["probes"] = [c.as_dict() for c in res.probes]
    if res.summary:
        out["summary"] = res.summary
        if "sign" in res.summary:
            out["sign"] = {"sign": res.summary["sign"], "omega_factor": res.summary["omega_factor"]}
    return out, EXIT_OK if res.ok else EXIT_FAIL


def _params(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    d.pop("format")
    d.pop("timing")
    return d


def render(cfg: RunConfig, body: dict, duration_ms) -> str:
    env = {"params": _params(cfg), "tower": body.pop("tower", None), "values": body.pop("values", []),
           "defects": body.pop("defects", [])}
    if "sign" in body:
        env["sign"] = body.pop("sign")
    env.update(body)
    env["duration_ms"] = duration_ms
    if cfg.format == "json":
        return json.dumps(env, indent=2, default=str) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if cfg.command == "verify":
        w.writerow(["case", "defects", "thresholds", "ok"])
        for c in env["defects"]:
            w.writerow([c["case"], " ".join(c["defects"]), " ".join(c["thresholds"]), c["ok"]])
    else:
        w.writerow(["name", "value", "precision", "valuation"])
        for v in env["values"]:
            w.writerow([v["name"], v["value"], v["precision"], v["valuation"]])
        for d in env["defects"]:
            w.writerow([d["pair"], "", "", d["valuation"]])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtwist", description="twisted q-Bernoulli numbers and p-adic q-L-values")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--M", type=int, default=30, help="working p-adic precision")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--no-timing", dest="timing", action="store_false",
                        help="emit duration_ms as null so output is byte-reproducible")

    def twist(sp):
        sp.add_argument("--q", default="1+p", help="'1+p^k' or a rational 'a/b' with v(q-1) >= 1")
        sp.add_argument("--h", type=int, default=1)
        sp.add_argument("--xi-order", type=int, default=1)
        sp.add_argument("--chi-modulus", type=int, default=1)
        sp.add_argument("--chi-index", type=int, default=0)

    sp = sub.add_parser("qbern", help="table of beta^(h)_(n,xi,chi)(x, q) for n = 0..N")
    common(sp)
    twist(sp)
    sp.add_argument("--n", type=int, default=1, help="largest index")
    sp.add_argument("--x", default="0")

    sp = sub.add_parser("lvalue", help="L-value partial sums at s (or s = 1 - m)")
    common(sp)
    twist(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--s")
    g.add_argument("--m", type=int)
    sp.add_argument("--alpha", type=int, default=2)
    sp.add_argument("--N", type=int, default=3)
    sp.add_argument("--branch", type=int, default=0)
    sp.add_argument("--mazur", choices=("weighted", "standard"), default="weighted")

    sp = sub.add_parser("verify", help="run an identity suite over the default grid")
    sp.add_argument("suite", choices=("witt", "formal-series", "distribution", "additivity", "euler", "mazur",
                                      "interpolation", "limits"))
    sp.add_argument("--grid", help="alternative grid JSON")
    sp.add_argument("--D", type=int, default=30, help="q-degree for the formal-series suite")
    sp.add_argument("--M", type=int, default=30)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--no-timing", dest="timing", action="store_false")
    return ap


COMMANDS = {"qbern": cmd_qbern, "lvalue": cmd_lvalue, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    cfg = RunConfig(**fields)
    t0 = time.perf_counter()
    try:
        cfg.validate()
        body, code = COMMANDS[cfg.command](cfg)
    except PrecisionError as e:
        print(f"precision exhausted: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except VerificationFailure as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (DomainError, InsufficientLevel, UnsupportedOrder, ValueError) as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    ms = round((time.perf_counter() - t0) * 1000) if cfg.timing else None
    out.write(render(cfg, body, ms))
    return code


if __name__ == "__main__":
    sys.exit(main())
