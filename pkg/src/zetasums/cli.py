"""Command-line entry point: ``zetasums constants | verify | eval``.

Exit status is 0 on success, 1 when any verification record or reference
check fails, and 2 for an invalid configuration.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import __version__
from . import constants as C
from . import special as S
from .numeric import MIN_DIGITS, default_digits
from .report import Report, discrepancy_notes, fmt, reference_checks, render
from .sums import PROPS, PropositionCase, VerificationRecord, default_grid, verify

FAMILY_NAMES = {
    "stieltjes": "stieltjes",
    "stieltjes-a": "stieltjes_a",
    "gamma-c": "gamma_c",
    "eta": "eta",
    "zeta": "zeta",
}

EVAL_FNS = ("li", "hurwitz", "zeta", "gamma", "loggamma", "digamma", "polygamma", "zeta-logderiv")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    digits: int
    tol: str
    kmax: int
    props: list[str]
    js: list[int]
    ells: list[int]
    zs: list[str]
    avals: list[str]
    format: str = "json"
    cache_path: str | None = None
    jobs: int = 1
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.digits < MIN_DIGITS:
            raise ConfigError(f"--digits must be >= {MIN_DIGITS}")
        try:
            tol = mpf(self.tol)
        except (ValueError, TypeError):
            raise ConfigError(f"--tol {self.tol!r} is not a number") from None
        if not tol > 0:
            raise ConfigError("--tol must be positive")
        if math.log10(float(tol)) < -(self.digits - 15) - 1e-9:
            raise ConfigError(f"--tol must be >= 1e-{self.digits - 15} at {self.digits} digits")
        for z in self.zs:
            zf = _fraction(z, "--z")
            if abs(zf) < 1 or zf == -1:
                raise ConfigError(f"--z {z}: need |z| >= 1 and z != -1")
        for a in self.avals:
            if _fraction(a, "--a") <= 0:
                raise ConfigError(f"--a {a}: need a > 0")
        if any(j < 0 for j in self.js) or any(e < 0 for e in self.ells):
            raise ConfigError("--j and --ell values must be non-negative")
        if self.kmax < 2:
            raise ConfigError("--kmax must be >= 2")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")

    def echo(self) -> dict:
        d = asdict(self)
        for k in ("extra", "out", "cache_path", "jobs"):
            d.pop(k)
        return d


def _fraction(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{flag} {text!r} is not a rational number") from None


def _split(values, conv=str):
    out = []
    for v in values or []:
        for part in str(v).split(","):
            part = part.strip()
            if part:
                out.append(conv(part))
    return out


def _prop_name(text: str) -> str:
    t = text.strip().upper()
    if t in ("1", "2", "3", "4"):
        return "P" + t
    if t in PROPS:
        return t
    raise ConfigError(f"unknown proposition {text!r} (use 1, 2, 3, 4 or T)")


# --- verify ------------------------------------------------------------------------


def _run_case(args):
    case, tol, digits, kmax = args
    C.default_table().kmax = kmax
    try:
        return verify(case, tol, digits)
    except (ArithmeticError, ValueError) as exc:
        return VerificationRecord(case, None, None, None, None, 0, 0, False, 0, digits, mpf(tol),
                                  error=f"{type(exc).__name__}: {exc}")


def build_cases(cfg: RunConfig) -> list[PropositionCase]:
    zs = [_fraction(z, "--z") for z in cfg.zs]
    avals = [_fraction(a, "--a") for a in cfg.avals]
    return default_grid(js=cfg.js, zs=zs, ells=cfg.ells, avals=avals, props=cfg.props)


def run_verify(cfg: RunConfig) -> Report:
    cfg.validate()
    cases = build_cases(cfg)
    work = [(c, cfg.tol, cfg.digits, cfg.kmax) for c in cases]
    table = C.default_table()
    saved = table.kmax
    try:
        if cfg.jobs > 1 and len(work) > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                records = list(pool.map(_run_case, work))
        else:
            records = [_run_case(w) for w in work]
    finally:
        # --kmax caps the grid only; reference values use the full table
        table.kmax = saved
    records.sort(key=lambda r: r.case.sort_key())
    checks = reference_checks(records, cfg.digits)
    notes = discrepancy_notes(records, cfg.digits)
    return Report(cfg.echo(), records, checks, notes)


# --- constants ------------------------------------------------------------------------


def constants_rows(family: str, kmax: int, digits: int, a: str | None = None) -> list[tuple[int, mpf]]:
    fam = FAMILY_NAMES.get(family)
    if fam is None:
        raise ConfigError(f"unknown family {family!r}; choose from {', '.join(FAMILY_NAMES)}")
    if kmax < 0:
        raise ConfigError("--kmax must be >= 0")
    if fam == "stieltjes_a":
        if a is None:
            raise ConfigError("--family stieltjes-a needs --a")
        av = _fraction(a, "--a")
        if av <= 0:
            raise ConfigError("--a must be positive")
        with mp.workdps(digits + 10):
            vals = C.stieltjes_a_coeffs(kmax, mpf(av.numerator) / av.denominator, digits)
    elif a is not None:
        raise ConfigError(f"--a only applies to stieltjes-a, not {family}")
    elif fam == "stieltjes":
        vals = C.stieltjes_a_coeffs(kmax, 1, digits)
    elif fam == "gamma_c":
        vals = C.gamma_c_coeffs(kmax, digits)
    elif fam == "eta":
        vals = C.eta_coeffs(kmax, digits)
    else:
        if kmax < 2:
            raise ConfigError("zeta values start at k = 2; use --kmax >= 2")
        return [(k, C.zeta_int(k, digits)) for k in range(2, kmax + 1)]
    return list(enumerate(vals))


def render_constants(family: str, rows, digits: int, fmt_name: str, a: str | None) -> str:
    if fmt_name == "json":
        doc = {
            "tool": "zetasums",
            "version": __version__,
            "family": family,
            "a": a,
            "digits": digits,
            "values": [{"k": k, "value": fmt(v, digits)} for k, v in rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "value"])
        for k, v in rows:
            w.writerow([k, fmt(v, digits)])
        return buf.getvalue()
    return "".join(f"{k:>4}  {fmt(v, digits)}\n" for k, v in rows)


# --- eval ------------------------------------------------------------------------------


def eval_function(ns) -> mpf:
    fn = ns.fn

    def need(name):
        v = getattr(ns, name)
        if v is None:
            raise ConfigError(f"--fn {fn} needs --{name}")
        return v

    def num(text):
        try:
            fr = Fraction(text)
        except (ValueError, ZeroDivisionError):
            return mpf(text)
        return mpf(fr.numerator) / fr.denominator

    try:
        if fn == "li":
            return S.polylog_int(int(need("m")), num(need("z")))
        if fn == "hurwitz":
            order = ns.order or 0
            return S.hurwitz_taylor(num(need("s")), num(ns.a or "1"), order).derivative(order)
        if fn == "zeta":
            return S.zeta(num(need("s")))
        if fn == "gamma":
            return S.gamma(num(need("x")))
        if fn == "loggamma":
            return S.log_gamma(num(need("x")))
        if fn == "digamma":
            return S.digamma(num(need("x")))
        if fn == "polygamma":
            return S.polygamma(int(need("j")), num(need("x")))
        if fn == "zeta-logderiv":
            return S.zeta_logderiv(int(ns.ell or 0), num(need("s")))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError(f"unknown function {fn!r}")


# --- argument parsing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zetasums", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"zetasums {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--digits", type=int, default=None,
                        help="working precision in decimal digits (default: $ZETASUMS_DIGITS or 40)")
        sp.add_argument("--format", choices=("json", "csv", "text"), default=None)
        sp.add_argument("--out", default=None, help="write output to PATH instead of stdout")
        sp.add_argument("--cache", default=None, help="JSON file caching computed constants")

    c = sub.add_parser("constants", help="tabulate a coefficient family")
    common(c)
    c.add_argument("--family", required=True, help="stieltjes, stieltjes-a, gamma-c, eta or zeta")
    c.add_argument("--kmax", type=int, default=10)
    c.add_argument("--a", default=None, help="Hurwitz parameter for stieltjes-a (e.g. 1/2)")

    v = sub.add_parser("verify", help="compare both sides over a grid of cases")
    common(v)
    v.add_argument("--tol", default=None, help="pass threshold (default 10^-(digits-20))")
    v.add_argument("--kmax", type=int, default=C.K_MAX, help="largest coefficient index for the right sides")
    v.add_argument("--props", nargs="+", default=["1,2,3,4,T"])
    v.add_argument("--j", nargs="+", default=["0,1,2"])
    v.add_argument("--ell", nargs="+", default=["0,1,2"])
    v.add_argument("--z", nargs="+", default=["1,2,10"])
    v.add_argument("--a", nargs="+", default=["1,1/2,2"])
    v.add_argument("--jobs", type=int, default=1)

    e = sub.add_parser("eval", help="evaluate one special function")
    e.add_argument("--digits", type=int, default=None)
    e.add_argument("--fn", required=True, choices=EVAL_FNS)
    for name in ("m", "j", "z", "s", "a", "x", "ell", "order"):
        e.add_argument(f"--{name}", default=None)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        digits = ns.digits if ns.digits is not None else default_digits()
        if digits < MIN_DIGITS:
            raise ConfigError(f"--digits must be >= {MIN_DIGITS}")
        if ns.command == "eval":
            with mp.workdps(digits):
                value = eval_function(ns)
                sys.stdout.write(fmt(value, digits) + "\n")
            return 0

        table = C.ConstantsTable(ns.cache) if ns.cache else C.ConstantsTable()
        C.set_default_table(table)
        if ns.command == "constants":
            rows = constants_rows(ns.family, ns.kmax, digits, ns.a)
            _emit(render_constants(ns.family, rows, digits, ns.format or "text", ns.a), ns.out)
            table.flush()
            return 0

        cfg = RunConfig(
            digits=digits,
            tol=ns.tol if ns.tol is not None else f"1e-{digits - 20}",
            kmax=ns.kmax,
            props=sorted({_prop_name(p) for p in _split(ns.props)}, key=PROPS.index),
            js=sorted(set(_split(ns.j, int))),
            ells=sorted(set(_split(ns.ell, int))),
            zs=_split(ns.z),
            avals=_split(ns.a),
            format=ns.format or "json",
            cache_path=ns.cache,
            jobs=ns.jobs,
            out=ns.out,
        )
        report = run_verify(cfg)
        _emit(render(report, cfg.format), cfg.out)
        table.flush()
        return report.exit_code
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"zetasums: error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"zetasums: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
