"""Command-line entry point.

Every subcommand maps onto one library operation and prints a result
envelope (JSON) on standard output. Exit codes: 0 success, 2 validation
error, 3 resource cap exceeded, 4 internal consistency failure. Exact
subcommands are byte-reproducible in their payload across runs and worker
counts; randomized ones are byte-reproducible given a seed.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import cache as cachemod
from .config import RunConfig
from .errors import (CapExceededError, InternalCheckError, ValidationError)
from .fields import field_from_q
from .polys import (Poly, count_irreducibles, enumerate_monic, poly_from_text,
                    poly_to_text, von_mangoldt)
from .serialize import envelope_json, payload_json, rows_to_csv, to_jsonable


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--enum-cap", type=int, default=None)
    p.add_argument("--phi-cap", type=int, default=None)
    p.add_argument("--workers", type=int, default=1,
                   help="accepted for interface parity; results are "
                        "scheduling-independent")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write the table/envelope "
                   "to a file instead of stdout")


def _config(args) -> RunConfig:
    kw = {"use_cache": not args.no_cache, "workers": args.workers,
          "output_format": args.format}
    if args.enum_cap is not None:
        kw["enumeration_cap"] = args.enum_cap
    if args.phi_cap is not None:
        kw["phi_cap"] = args.phi_cap
    if args.cache_dir is not None:
        kw["cache_dir"] = args.cache_dir
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    if getattr(args, "D", None) is not None:
        kw["truncation_degree"] = args.D
    return RunConfig(**kw)


def _field(args, config):
    return field_from_q(args.q, config)


def _poly(field, text):
    return poly_from_text(field, text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ffvar",
        description="Exact experiments on prime-polynomial count variances "
                    "over F_q[T]")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("irr", help="count monic irreducibles of a degree")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check-enum", action="store_true",
                   help="cross-check against exhaustive enumeration")
    _add_common(p)

    p = sub.add_parser("lambda-sum",
                       help="sum the prime-power weight over monic degree n")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("chars", help="character census mod Q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--Q", required=True)
    _add_common(p)

    p = sub.add_parser("lfun", help="L-function data for one character")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--chi", type=int, required=True,
                   help="character index (0 = trivial)")
    _add_common(p)

    p = sub.add_parser("var-si", help="short-interval variance")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--method", choices=("direct", "characters", "both"),
                   default="both")
    _add_common(p)

    p = sub.add_parser("var-ap", help="arithmetic-progression variance")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("direct", "characters", "both"),
                   default="both")
    _add_common(p)

    p = sub.add_parser("rmt", help="Monte Carlo unitary trace moment")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("hl-psi2", help="twin prime-power count")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", required=True)
    _add_common(p)

    p = sub.add_parser("hl-sing", help="truncated singular series")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--K", required=True)
    p.add_argument("--D", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("hl-jsum", help="offset sums of the singular series")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--D", type=int, default=None)
    p.add_argument("--method", choices=("direct", "series", "both"),
                   default="both")
    _add_common(p)

    p = sub.add_parser("hl-g", help="twin-prime heuristic for G(n; Q)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--D", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("sweep", help="run a sweep spec file")
    p.add_argument("--spec", required=True)
    _add_common(p)

    p = sub.add_parser("cache", help="manage the unit-group cache")
    p.add_argument("action", choices=("stat", "clear", "verify"))
    _add_common(p)
    return ap


# ---------------------------------------------------------------------------

def _cmd_irr(args, config):
    field = _field(args, config)
    count = count_irreducibles(field, args.n)
    payload = {"q": field.q, "n": args.n, "count": count}
    if args.check_enum:
        from .polys import is_irreducible
        brute = sum(1 for f in enumerate_monic(field, args.n, config=config)
                    if is_irreducible(f))
        payload["enumeration_count"] = brute
        payload["agrees"] = brute == count
        if not payload["agrees"]:
            raise InternalCheckError("irreducible count mismatch")
    return payload


def _cmd_lambda_sum(args, config):
    field = _field(args, config)
    n = args.n
    if n < 1:
        raise ValidationError("n must be >= 1")
    if field.has_tables:
        import numpy as np

        from .bulk import lambda_table
        total = int(lambda_table(field, n, config).astype(np.int64).sum())
    else:
        total = sum(von_mangoldt(f)
                    for f in enumerate_monic(field, n, config=config))
    return {"q": field.q, "n": n, "sum": total, "q_pow_n": field.q**n,
            "equal": total == field.q**n}


def _cmd_chars(args, config):
    from .characters import char_census
    field = _field(args, config)
    rec = char_census(_poly(field, args.Q), config)
    rec["Q"] = args.Q
    return rec


def _cmd_lfun(args, config):
    from .characters import characters
    from .lfunctions import frobenius, l_coeffs
    field = _field(args, config)
    Q = _poly(field, args.Q)
    fam = characters(Q, config)
    chi = fam[args.chi]
    payload = {
        "q": field.q, "Q": args.Q, "chi_index": chi.index,
        "exponents": list(chi.exponents),
        "generator_orders": list(chi.group.orders),
        "is_trivial": chi.is_trivial, "is_even": chi.is_even,
        "is_primitive": chi.is_primitive, "order": chi.order,
    }
    if chi.is_trivial:
        return payload
    lf = l_coeffs(chi, config)
    M = chi.group.exponent
    payload["value_order"] = M
    payload["coeffs"] = [list(c.coeffs) for c in lf.coeffs]
    payload["completed"] = ([list(c.coeffs) for c in lf.completed]
                            if lf.completed is not None else None)
    if chi.is_primitive:
        fc = frobenius(chi, lf, config)
        payload["frobenius"] = {"N": fc.matrix_size,
                                "angles": list(fc.angles),
                                "rh_residual": fc.rh_residual}
    return payload


def _cmd_var_si(args, config):
    from .short_intervals import si_variance
    field = _field(args, config)
    rep = si_variance(field, args.n, args.h, args.method, config)
    payload = to_jsonable(rep)
    payload["normalized_variance"] = rep.normalized_variance
    payload["deviation"] = rep.deviation
    return payload


def _cmd_var_ap(args, config):
    from .progressions import g_variance
    field = _field(args, config)
    rep = g_variance(args.n, _poly(field, args.Q), args.method, config)
    payload = to_jsonable(rep)
    payload["normalized_G"] = rep.normalized_G
    payload["deviation_rmt"] = rep.deviation_rmt
    return payload


def _cmd_rmt(args, config):
    from .rmt import trace_moment_mc
    m = trace_moment_mc(args.N, args.n, args.samples, args.seed)
    payload = to_jsonable(m)
    payload["exact"] = m.exact
    payload["within_std_errors"] = m.within
    return payload


def _cmd_hl_psi2(args, config):
    from .hardy_littlewood import psi2
    field = _field(args, config)
    K = _poly(field, args.K)
    value = psi2(args.n, K, config)
    return {"q": field.q, "n": args.n, "K": args.K, "psi2": value,
            "q_pow_n": field.q**args.n}


def _cmd_hl_sing(args, config):
    from .hardy_littlewood import singular_series
    field = _field(args, config)
    rec = singular_series(_poly(field, args.K), config.truncation_degree,
                          config)
    payload = to_jsonable(rec)
    payload.update({"q": field.q, "K": args.K})
    return payload


def _cmd_hl_jsum(args, config):
    from .hardy_littlewood import (jsum_direct, jsum_hl_prediction,
                                   jsum_series)
    field = _field(args, config)
    Q = _poly(field, args.Q)
    D = config.truncation_degree
    payload = {"q": field.q, "Q": args.Q, "j": args.j, "D": D,
               "prediction": to_jsonable(jsum_hl_prediction(Q, args.j))}
    if args.method in ("direct", "both"):
        payload["direct"] = jsum_direct(Q, args.j, D, config)
    if args.method in ("series", "both"):
        payload["series"] = jsum_series(Q, args.j, D, config)
    if args.method == "both":
        a, b = payload["direct"], payload["series"]
        payload["relative_gap"] = abs(a - b) / max(abs(a), 1e-300)
        if payload["relative_gap"] > config.jsum_rel_tol:
            raise InternalCheckError("the two J-sum routes disagree")
    return payload


def _cmd_hl_g(args, config):
    from .hardy_littlewood import hl_g_prediction
    field = _field(args, config)
    return hl_g_prediction(args.n, _poly(field, args.Q),
                           config.truncation_degree, config)


def _cmd_sweep(args, config):
    with open(args.spec) as fh:
        spec = json.load(fh)
    experiment = spec.get("experiment")
    if experiment == "var-si":
        from .short_intervals import si_sweep
        rows = si_sweep(spec["n"], spec["h"], spec["q_list"],
                        spec.get("method", "characters"), config)
    elif experiment == "var-ap":
        from .progressions import g_sweep
        rows = g_sweep(spec["n"], spec["template"], spec["q_list"],
                       spec.get("method", "characters"), config)
    else:
        raise ValidationError(f"unknown sweep experiment {experiment!r}")
    return {"experiment": experiment, "spec": spec, "rows": rows}


def _cmd_cache(args, config):
    if args.action == "stat":
        return cachemod.cache_stat(config)
    if args.action == "clear":
        return cachemod.cache_clear(config)
    return cachemod.cache_verify(config)


_COMMANDS = {
    "irr": _cmd_irr,
    "lambda-sum": _cmd_lambda_sum,
    "chars": _cmd_chars,
    "lfun": _cmd_lfun,
    "var-si": _cmd_var_si,
    "var-ap": _cmd_var_ap,
    "rmt": _cmd_rmt,
    "hl-psi2": _cmd_hl_psi2,
    "hl-sing": _cmd_hl_sing,
    "hl-jsum": _cmd_hl_jsum,
    "hl-g": _cmd_hl_g,
    "sweep": _cmd_sweep,
    "cache": _cmd_cache,
}


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.monotonic()
    config = _config(args)
    try:
        payload = _COMMANDS[args.command](args, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 4
    if args.format == "csv" and isinstance(payload, dict) \
            and isinstance(payload.get("rows"), list):
        _emit(rows_to_csv(payload["rows"]), args)
    elif args.format == "csv":
        _emit(rows_to_csv([payload]), args)
    else:
        _emit(envelope_json(payload, config, started), args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
