"""Command-line interface.

Subcommands: field, tables, action, bounds, cn.  Exit codes: 0 success,
1 verification mismatch or computation failure, 2 invalid input.  Every
JSON report embeds a run manifest; outputs are deterministic for a fixed
manifest apart from the recorded wall time.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import (
    friedman_g,
    min_max_scan,
    curve_csv,
    zimmert_ab,
    zimmert_exp_lb,
    zimmert_fried_lb,
    zimmert_prefactor,
    zimmert_regulator_lb,
)
from .cartan import (
    ActionCase,
    classify,
    from_unit_system,
    verify_action,
    weyl_chambers,
)
from .errors import (
    InvalidInput,
    QuadratureNotConverged,
    ToolkitError,
    VerificationError,
)
from .fried import full_report
from .intpoly import IntPolynomial, discriminant, format_polynomial, parse_polynomial
from .numberfield import (
    FieldElement,
    NumberField,
    UnitSystem,
    element_norm,
    find_real_roots,
)
from .slow import c_of_n, equal_coefficient_value, slow_entropy
from .tables import compute_table, render_table, unit_system_for

_DEFAULTS = {
    "seed": 94111,
    "mcSamples": 1_000_000,
    "basisBound": 3,
    "zimmertS": 0.35,
    "deltaTol": 1e-4,
    "crossCheckTol": 1e-9,
}


@dataclass
class RunManifest:
    command: str
    inputs: dict
    tool_version: str = __version__
    seed: int = _DEFAULTS["seed"]
    tolerances: dict = field(default_factory=lambda: {
        "delta": _DEFAULTS["deltaTol"],
        "crossCheck": _DEFAULTS["crossCheckTol"],
    })
    wall_time_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "toolVersion": self.tool_version,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "wallTimeSeconds": self.wall_time_seconds,
        }


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    out = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or "=" not in line:
                    continue
                key, _, value = line.partition("=")
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise InvalidInput(f"cannot read config {path}: {exc}") from exc
    return out


def _setting(args, config: dict, key: str, cast):
    flag = getattr(args, _flag_name(key), None)
    if flag is not None:
        return flag
    if key in config:
        try:
            return cast(config[key])
        except ValueError as exc:
            raise InvalidInput(f"bad config value for {key}") from exc
    return _DEFAULTS[key]


def _flag_name(key: str) -> str:
    out = []
    for ch in key:
        if ch.isupper():
            out.append("_")
            out.append(ch.lower())
        else:
            out.append(ch)
    return "".join(out)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _emit_json(payload: dict, manifest: RunManifest, started: float):
    manifest.wall_time_seconds = time.perf_counter() - started
    payload = {"manifest": manifest.as_dict(), **payload}
    print(json.dumps(payload, indent=2, sort_keys=True))


def _parse_int_range(text: str) -> list[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError as exc:
            raise InvalidInput(f"bad integer range {text!r}") from exc
        values = list(range(lo_i, hi_i + 1))
    else:
        try:
            values = [int(text)]
        except ValueError as exc:
            raise InvalidInput(f"bad integer {text!r}") from exc
    if not values:
        raise InvalidInput(f"empty range {text!r}")
    return values


def _thread_count() -> int:
    raw = os.environ.get("CARTAN_ENTROPY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------- field

def _field_pipeline(f: IntPolynomial, args, config: dict,
                    include_l: bool = True) -> dict:
    us = unit_system_for(f, getattr(args, "coeff_bound", None))
    x = np.asarray(us.log_matrix, dtype=float)
    seed = int(_setting(args, config, "seed", int))
    mc = int(_setting(args, config, "mcSamples", int))
    bb = int(_setting(args, config, "basisBound", int))
    s = float(_setting(args, config, "zimmertS", float))
    l_values = None if include_l else ()
    fried = full_report(x, l_values=l_values, basis_bound=bb,
                        mc_samples=mc, seed=seed, zimmert_s=s)
    # slow entropy and the Zimmert bounds only make sense for degree >= 3
    slow = slow_entropy(x) if f.degree >= 3 else None
    bounds_block = None
    if f.degree >= 3:
        reg_lb = zimmert_regulator_lb(f.degree, s)
        bounds_block = {
            "zimmertS": s,
            "regulatorLB": reg_lb,
            "regulatorSatisfied": us.regulator > reg_lb,
            "friedLB": zimmert_fried_lb(f.degree, s),
            "friedSatisfied":
                fried.fried_entropy > zimmert_fried_lb(f.degree, s),
            "expLB": zimmert_exp_lb(f.degree, s),
        }
    if bounds_block is not None and getattr(args, "friedman", False):
        disc = discriminant(f)
        try:
            g, g_err = friedman_g(1.0 / abs(disc), f.degree)
            bounds_block["friedman"] = {
                "g": g, "errorEstimate": g_err, "twoG": 2.0 * g,
                "satisfied": us.regulator > 2.0 * g,
            }
        except QuadratureNotConverged as exc:
            bounds_block["friedman"] = {"computed": False, "reason": str(exc)}
    return {
        "field": {
            "degree": f.degree,
            "polynomial": format_polynomial(f),
            "coefficients": list(f.coeffs),
            "discriminant": discriminant(f),
        },
        "unitSystem": {
            "regulator": us.regulator,
            "units": [u.as_strings() for u in us.units],
            "logMatrix": [list(map(float, row)) for row in us.log_matrix],
        },
        "fried": fried.as_dict(),
        "slow": None if slow is None else slow.as_dict(),
        "bounds": bounds_block,
    }


def cmd_field(args, config: dict) -> int:
    started = time.perf_counter()
    f = parse_polynomial(args.polynomial)
    payload = _field_pipeline(f, args, config)
    manifest = RunManifest("field", {"polynomial": args.polynomial},
                           seed=int(_setting(args, config, "seed", int)))
    if args.json:
        _emit_json(payload, manifest, started)
    else:
        fr = payload["fried"]
        sl = payload["slow"]
        print(f"field: {payload['field']['polynomial']} "
              f"(degree {payload['field']['degree']}, "
              f"discriminant {payload['field']['discriminant']})")
        print(f"regulator        {_fmt(payload['unitSystem']['regulator'])}")
        print(f"fried entropy    {_fmt(fr['friedEntropy'])}")
        print(f"ball volume      closed {_fmt(fr['volClosed'])}   "
              f"geometric {_fmt(fr['volGeometric']['value'])} "
              f"({fr['volGeometric']['method']})")
        print(f"one entropy      {_fmt(fr['oneEntropy']['value'])} at "
              f"{fr['oneEntropy']['minimizer']}")
        for le in fr["lEntropies"]:
            print(f"l-entropy l={le['ell']}   "
                  f"[{_fmt(le['lowerBound'])}, {_fmt(le['upperEstimate'])}]")
        if sl is not None:
            print(f"slow entropy     {_fmt(sl['shEntropy'])} "
                  f"(C({sl['n']}) = {_fmt(sl['cOfN'])})")
        if payload["bounds"] is not None:
            print(f"zimmert reg lb   "
                  f"{_fmt(payload['bounds']['regulatorLB'])} "
                  f"satisfied={payload['bounds']['regulatorSatisfied']}")
        if payload["bounds"] is not None and "friedman" in payload["bounds"]:
            fb = payload["bounds"]["friedman"]
            if fb.get("computed", True):
                print(f"friedman 2g      {_fmt(fb['twoG'])} "
                      f"satisfied={fb['satisfied']}")
            else:
                print(f"friedman         not computed ({fb['reason']})")
    return 0


# --------------------------------------------------------------- tables

def cmd_tables(args, config: dict) -> int:
    started = time.perf_counter()
    threads = _thread_count()
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        from .tables import FIELD_ROWS, compute_row

        ordered = sorted(FIELD_ROWS, key=lambda r: (r.degree, r.disc))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(compute_row, ordered))
    else:
        results = compute_table()
    worst = max(r.delta for r in results)
    ok = all(r.ok for r in results)
    manifest = RunManifest("tables", {"rows": len(results)})
    if args.json:
        _emit_json({"rows": [r.as_dict() for r in results],
                    "worstDelta": worst, "ok": ok}, manifest, started)
    elif args.csv:
        print("degree,D_K,polynomial,R_K_computed,R_K_paper,"
              "h_computed,h_paper,delta")
        for r in results:
            print(f"{r.degree},{r.disc},\"{r.polynomial}\","
                  f"{r.reg_computed!r},{r.reg_paper!r},"
                  f"{r.h_computed!r},{r.h_paper!r},{r.delta!r}")
    else:
        print(render_table(results))
        print(f"\nworst |delta| = {_fmt(worst)} "
              f"({'ok' if ok else 'MISMATCH'})")
    return 0 if ok else 1


# --------------------------------------------------------------- action

def _load_action_input(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from exc


def _unit_system_from_coeffs(f: IntPolynomial, unit_rows) -> UnitSystem:
    """Unit system over explicitly given unit coefficient vectors (no
    search, no saturation); exact unit norms are still enforced."""
    emb = find_real_roots(f)
    nf = NumberField(f, emb)
    units = []
    for row in unit_rows:
        el = FieldElement.from_ints(list(row) + [0] * (f.degree - len(row)))
        norm = element_norm(f, el)
        if norm not in (1, -1):
            raise InvalidInput(f"element {el.as_strings()} has norm {norm}")
        units.append(el)
    if not units:
        raise InvalidInput("at least one unit required")
    x = np.column_stack([nf.log_vector(u) for u in units])
    n = f.degree
    if len(units) == n - 1:
        minors = [abs(float(np.linalg.det(np.delete(x, j, axis=0))))
                  for j in range(n)]
        reg = float(np.mean(minors))
    else:
        reg = 0.0
    return UnitSystem(f=f, embeddings=emb, units=tuple(units),
                      log_matrix=x, regulator=reg)


def cmd_action(args, config: dict) -> int:
    started = time.perf_counter()
    data = _load_action_input(args.input)
    if isinstance(data, dict) and "polynomial" in data:
        f = parse_polynomial(data["polynomial"]
                             if isinstance(data["polynomial"], str)
                             else json.dumps(data["polynomial"]))
        us = _unit_system_from_coeffs(f, data.get("units", []))
        action = from_unit_system(f, us)
        matrices = action.matrices
    elif isinstance(data, list):
        matrices = data
    else:
        raise InvalidInput(
            "expected a JSON list of matrices or {polynomial, units}")
    diag = verify_action(matrices)
    x = diag.action.lyapunov
    case = classify(x)
    payload: dict = {"diagnostics": diag.as_dict(), "case": case.value}
    if case is ActionCase.O:
        payload["rationale"] = (
            "the Lyapunov functionals share a nontrivial common kernel "
            "(rank(X) < k), so every entropy-type invariant vanishes")
        payload["friedEntropy"] = 0.0
        payload["slowEntropy"] = 0.0
    else:
        seed = int(_setting(args, config, "seed", int))
        mc = int(_setting(args, config, "mcSamples", int))
        bb = int(_setting(args, config, "basisBound", int))
        s = float(_setting(args, config, "zimmertS", float))
        fried = full_report(x, basis_bound=bb, mc_samples=mc, seed=seed,
                            zimmert_s=s)
        payload["fried"] = fried.as_dict()
        if diag.action.n >= 3:
            payload["slow"] = slow_entropy(x).as_dict()
        chambers = weyl_chambers(x)
        payload["weylChambers"] = {
            "count": len(chambers),
            "expected": 2 ** x.shape[0] - 2,
            "patterns": [list(p) for p, _ in chambers],
        }
    manifest = RunManifest("action", {"input": args.input})
    if args.json:
        _emit_json(payload, manifest, started)
    else:
        print(f"case {payload['case']}  "
              f"(n={diag.action.n}, k={diag.action.k}, "
              f"determinants {list(diag.determinants)})")
        if case is ActionCase.O:
            print("fried entropy    0  (case O)")
            print("slow entropy     0  (case O)")
            print(payload["rationale"])
        else:
            print(f"fried entropy    {_fmt(payload['fried']['friedEntropy'])}")
            print(f"one entropy      "
                  f"{_fmt(payload['fried']['oneEntropy']['value'])}")
            if "slow" in payload:
                print(f"slow entropy     {_fmt(payload['slow']['shEntropy'])}")
            print(f"weyl chambers    {payload['weylChambers']['count']} "
                  f"(expected {payload['weylChambers']['expected']})")
    return 0


# --------------------------------------------------------------- bounds

def cmd_bounds(args, config: dict) -> int:
    started = time.perf_counter()
    s_text = args.s
    n_values = _parse_int_range(args.n) if args.n else list(range(8, 18))
    if s_text and ":" not in s_text:
        # single-s mode: entropy bound curves across n
        s = float(s_text)
        rows = []
        for n in n_values:
            if n < 3:
                raise InvalidInput("n must be at least 3 for the curves")
            rows.append({"n": n, "s": s,
                         "zExp": zimmert_exp_lb(n, s),
                         "zFried": zimmert_fried_lb(n, s)})
        a, b = zimmert_ab(s)
        constants = {
            "prefactorRaw": zimmert_prefactor(s)[0],
            "prefactorCalibrated": zimmert_prefactor(s)[1],
            "b": b,
            "expPrefactor": 2.0 * zimmert_prefactor(s)[1],
            "expExponent": b - math.log(2.0),
        }
        manifest = RunManifest("bounds", {"s": s, "n": args.n})
        if args.json:
            _emit_json({"curve": rows, "constants": constants},
                       manifest, started)
        else:
            print(f"s = {s}: calibrated prefactor "
                  f"{_fmt(constants['prefactorCalibrated'])}, "
                  f"b = {_fmt(constants['b'])}, exponential curve "
                  f"{_fmt(constants['expPrefactor'])}*exp("
                  f"{_fmt(constants['expExponent'])}*n)")
            for row in rows:
                print(f"n={row['n']:>3}  Zexp {_fmt(row['zExp'])}  "
                      f"Zfried {_fmt(row['zFried'])}")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write("n,s,Z\n")
                for row in rows:
                    fh.write(f"{row['n']},{row['s']!r},{row['zExp']!r}\n")
        return 0
    if s_text:
        lo, _, hi = s_text.partition(":")
        try:
            s_range = (float(lo), float(hi))
        except ValueError as exc:
            raise InvalidInput(f"bad s range {s_text!r}") from exc
    else:
        s_range = (0.1, 1.2)
    scan = min_max_scan(n_values, s_range)
    a035, b035 = zimmert_ab(0.35)
    constants = {
        "minMax": scan.value,
        "prefactorCalibrated": zimmert_prefactor(0.35)[1],
        "b035": b035,
        "expPrefactor": 2.0 * zimmert_prefactor(0.35)[1],
        "expExponent": b035 - math.log(2.0),
    }
    manifest = RunManifest("bounds", {"n": args.n, "s": args.s})
    if args.json:
        _emit_json({
            "scan": {
                "minMax": scan.value,
                "perN": {str(n): {"sStar": sv[0], "max": sv[1]}
                         for n, sv in scan.per_n.items()},
            },
            "constants": constants,
        }, manifest, started)
    else:
        print(f"min over n in [8,16] of max_s Z(n,s) = {_fmt(scan.value)}")
        print(f"exponential bound {_fmt(constants['expPrefactor'])}"
              f"*exp({_fmt(constants['expExponent'])}*n)")
        for n, (s_star, v) in sorted(scan.per_n.items()):
            print(f"n={n:>3}  max {_fmt(v)} at s* = {_fmt(s_star)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(curve_csv(scan.curves))
    return 0


# ------------------------------------------------------------------- cn

def cmd_cn(args, config: dict) -> int:
    started = time.perf_counter()
    n = args.n_value
    if not 3 <= n <= 8:
        raise InvalidInput("n must lie in [3, 8]")
    value, vec = c_of_n(n)
    probe = equal_coefficient_value(n)
    payload = {
        "n": n,
        "cOfN": value,
        "cVector": list(vec),
        "equalCoeffValue": probe,
        "probeDelta": abs(probe - value),
        "bounds": {"lower": (n - 1) / 2.0, "upper": float(n - 1)},
    }
    manifest = RunManifest("cn", {"n": n})
    if args.json:
        _emit_json(payload, manifest, started)
    else:
        print(f"C({n}) = {_fmt(value)}  in "
              f"[{_fmt(payload['bounds']['lower'])}, "
              f"{_fmt(payload['bounds']['upper'])}]")
        print(f"equal-coefficient probe {_fmt(probe)} "
              f"(delta {_fmt(payload['probeDelta'])})")
        print(f"minimizer {[round(v, 6) for v in vec]}")
    return 0


# ----------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartan-entropy",
        description="Entropy invariants of Cartan actions on tori: "
                    "average entropy, l-entropies, slow entropy, and the "
                    "analytic bound curves.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit a JSON report")
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--mc-samples", type=int, default=None,
                        dest="mc_samples")
    common.add_argument("--basis-bound", type=int, default=None,
                        dest="basis_bound")
    common.add_argument("--zimmert-s", type=float, default=None,
                        dest="zimmert_s")

    p_field = sub.add_parser("field", parents=[common],
                             help="analyze a totally real field")
    p_field.add_argument("polynomial",
                         help='polynomial text or "[c0,c1,...]" coefficients')
    p_field.add_argument("--coeff-bound", type=int, default=None,
                         dest="coeff_bound",
                         help="unit search coefficient box")
    p_field.add_argument("--friedman", action="store_true",
                         help="include the Friedman integral check")
    p_field.set_defaults(func=cmd_field)

    p_tables = sub.add_parser("tables", parents=[common],
                              help="reproduce the 19 reference fields")
    p_tables.add_argument("--csv", action="store_true")
    p_tables.set_defaults(func=cmd_tables)

    p_action = sub.add_parser("action", parents=[common],
                              help="analyze commuting integer matrices")
    p_action.add_argument("input",
                          help="JSON file of matrices, or - for stdin")
    p_action.set_defaults(func=cmd_action)

    p_bounds = sub.add_parser("bounds", parents=[common],
                              help="bound curves and scan constants")
    p_bounds.add_argument("--n", default=None,
                          help="integer range like 8..17")
    p_bounds.add_argument("--s", default=None,
                          help="single s (curve mode) or lo:hi scan range")
    p_bounds.add_argument("--out", default=None, help="write curve CSV here")
    p_bounds.set_defaults(func=cmd_bounds)

    p_cn = sub.add_parser("cn", parents=[common],
                          help="the slow-entropy constant C(n)")
    p_cn.add_argument("n_value", type=int, metavar="n")
    p_cn.set_defaults(func=cmd_cn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _load_config(getattr(args, "config", None))
    try:
        return args.func(args, config)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except ToolkitError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
