"""Batch command line: one verb per library operation, JSON in and out.

Exit codes: 0 success, 1 usage error, 2 domain error (with an error JSON
object carrying ``error_kind`` on stdout).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .errors import GmfError, MalformedInputError, NoBasisAvailableError
from .etaforms import EtaQuotient, eta_quotient_expansion, load_basis, validate_basis
from .gmfcore import (
    PGMF,
    all_checks_passed,
    certificate_to_obj,
    decompose_with_prefix,
    decomposition_from_obj,
    decomposition_to_obj,
    denominator_prime_report,
    finite_order_certificate,
    galois_norm,
    k_operator,
    verify_decomposition,
)
from .numberfield import RATIONAL, FieldTag
from .qseries import exp_from_logderiv
from .subgroup import GroupDescriptor, coset_reps, cusp_count, invariants


def _load_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise MalformedInputError(f"{path}: {exc.strerror or exc}") from None


def _parse_field(text):
    if text == "rational":
        return RATIONAL
    kind, sep, m = text.partition(":")
    if kind == "cyclotomic" and sep:
        try:
            return FieldTag.cyclotomic(int(m))
        except ValueError:
            pass
    raise MalformedInputError(f"bad field {text!r}; expected rational or cyclotomic:<m>")


def _load_series(path, field_text=None):
    series = jsonio.series_from_obj(_load_json(path))
    if field_text is None:
        return series
    target = _parse_field(field_text)
    if target.is_rational_field:
        return series.as_rational_series()
    return series.promote(target)


def _group(text):
    return GroupDescriptor.parse(text)


def _basis_for(group, precision, path):
    return load_basis(group, precision, path)


# ----------------------------------------------------------------------
# verb handlers


def cmd_kappa(args):
    inv = invariants(_group(args.group))
    return {
        "group": args.group,
        "p_index": inv.p_index,
        "cusps": inv.cusp_count,
        "kappa": inv.kappa,
        "contains_minus_identity": inv.contains_minus_identity,
    }


def cmd_cosets(args):
    reps = coset_reps(_group(args.group))
    return {
        "group": args.group,
        "count": len(reps),
        "reps": [[[m.a, m.b], [m.c, m.d]] for m in reps],
    }


def cmd_cusps(args):
    return {"group": args.group, "cusps": cusp_count(_group(args.group))}


def cmd_eta_expand(args):
    quotient = EtaQuotient.parse(args.quotient, args.ambient)
    series = eta_quotient_expansion(quotient, args.prec)
    if args.field is not None:
        target = _parse_field(args.field)
        if not target.is_rational_field:
            series = series.promote(target)
    return jsonio.series_to_obj(series)


def cmd_logderiv(args):
    return jsonio.series_to_obj(_load_series(args.f, args.field).theta_logderiv())


def cmd_exp_logderiv(args):
    return jsonio.series_to_obj(
        exp_from_logderiv(_load_series(args.f, args.field), args.prec)
    )


def cmd_mul(args):
    return jsonio.series_to_obj(
        _load_series(args.f, args.field) * _load_series(args.g, args.field)
    )


def cmd_inv(args):
    return jsonio.series_to_obj(_load_series(args.f, args.field).inverse(args.prec))


def cmd_pow(args):
    return jsonio.series_to_obj(_load_series(args.f, args.field) ** args.m)


def cmd_rescale(args):
    return jsonio.series_to_obj(_load_series(args.f, args.field).rescale_level(args.level))


def cmd_decompose(args):
    group = _group(args.group)
    series = _load_series(args.f)
    f = PGMF(series, group)
    prefix = jsonio.prefix_from_obj(_load_json(args.prefix), series.field)
    working = args.prec - min(series.lead, 0)
    basis = _basis_for(group, working, args.basis)
    dec = decompose_with_prefix(f, prefix, basis, args.prec)
    checks = verify_decomposition(f, dec, basis)
    return decomposition_to_obj(dec, checks=checks)


def _certify_one(path, group_text, prec, basis_path, prefix_path):
    group = GroupDescriptor.parse(group_text)
    series = jsonio.series_from_obj(_load_json(path))
    f = PGMF(series, group)
    working = prec - min(series.lead, 0)
    basis = load_basis(group, working, basis_path)
    prefix = None
    if prefix_path is not None:
        prefix = jsonio.prefix_from_obj(_load_json(prefix_path), series.field)
    cert = finite_order_certificate(f, basis, prec, prefix=prefix)
    return certificate_to_obj(cert)


def cmd_certify(args):
    if len(args.f) == 1:
        return _certify_one(args.f[0], args.group, args.prec, args.basis, args.prefix)
    jobs = max(args.jobs, 1)
    results = []
    if jobs == 1:
        for path in args.f:
            results.append(
                {
                    "input": path,
                    "certificate": _certify_one(
                        path, args.group, args.prec, args.basis, args.prefix
                    ),
                }
            )
    else:
        import concurrent.futures

        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_certify_one, path, args.group, args.prec, args.basis, args.prefix)
                for path in args.f
            ]
            for path, fut in zip(args.f, futures):
                results.append({"input": path, "certificate": fut.result()})
    return results


def cmd_verify(args):
    group = _group(args.group)
    f = PGMF(_load_series(args.f), group)
    dec = decomposition_from_obj(_load_json(args.dec), group)
    basis = None
    precision = max(dec.g0.precision, 2)
    if args.basis is not None:
        basis = _basis_for(group, precision, args.basis)
    else:
        try:
            basis = load_basis(group, precision)
        except NoBasisAvailableError:
            basis = None  # fit check reports itself as skipped
    checks = verify_decomposition(f, dec, basis)
    return {"checks": checks, "all_passed": all_checks_passed(checks)}


def cmd_galois_norm(args):
    group = _group(args.group)
    f = PGMF(_load_series(args.f), group)
    return jsonio.series_to_obj(galois_norm(f).expansion)


def cmd_k_op(args):
    group = _group(args.group)
    f = PGMF(_load_series(args.f), group)
    return jsonio.series_to_obj(k_operator(f).expansion)


def cmd_denom_primes(args):
    group = _group(args.group)
    report = denominator_prime_report(PGMF(_load_series(args.f), group))
    return {
        "primes": sorted(report.primes),
        "from_cyclotomic_coordinates": report.from_cyclotomic_coordinates,
    }


def cmd_validate_basis(args):
    group = _group(args.group)
    basis = _basis_for(group, args.prec, args.basis)
    checks = validate_basis(basis)
    return {
        "group": args.group,
        "dimension": basis.dimension,
        "checks": checks,
        "all_passed": all_checks_passed(checks),
    }


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmfkit",
        description="Exact q-expansion arithmetic, congruence subgroup invariants, "
        "and canonical decompositions.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, handler, help_text, field_flag=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--output", help="write the JSON result to a file instead of stdout")
        if field_flag:
            p.add_argument(
                "--field",
                default=None,
                help="coerce series into this field: rational | cyclotomic:<m>",
            )
        p.set_defaults(handler=handler)
        return p

    p = verb("kappa", cmd_kappa, "index, cusp count and kappa of a group")
    p.add_argument("group")

    p = verb("cosets", cmd_cosets, "coset representatives of the group in PSL2(Z)")
    p.add_argument("group")

    p = verb("cusps", cmd_cusps, "number of cusps")
    p.add_argument("group")

    p = verb("eta-expand", cmd_eta_expand, "expand an eta quotient, e.g. '1^2 11^2'", True)
    p.add_argument("quotient")
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--ambient", type=int, default=None, help="ambient level (default: lcm of divisors)")

    p = verb("logderiv", cmd_logderiv, "theta logarithmic derivative of a series", True)
    p.add_argument("--f", required=True)

    p = verb("exp-logderiv", cmd_exp_logderiv, "unit series with the given logarithmic derivative", True)
    p.add_argument("--f", required=True)
    p.add_argument("--prec", type=int, required=True)

    p = verb("mul", cmd_mul, "product of two series", True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)

    p = verb("inv", cmd_inv, "multiplicative inverse of a series", True)
    p.add_argument("--f", required=True)
    p.add_argument("--prec", type=int, default=None)

    p = verb("pow", cmd_pow, "integer power of a series", True)
    p.add_argument("--f", required=True)
    p.add_argument("--m", type=int, required=True)

    p = verb("rescale", cmd_rescale, "re-express a series at a finer level", True)
    p.add_argument("--f", required=True)
    p.add_argument("--level", type=int, required=True)

    p = verb("decompose", cmd_decompose, "canonical decomposition from a unitary-part prefix")
    p.add_argument("--f", required=True)
    p.add_argument("--prefix", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--basis", default=None, help="basis data file (default: shipped catalogue)")

    p = verb("certify", cmd_certify, "finite-order consistency certificate")
    p.add_argument("--f", required=True, nargs="+", help="series file(s)")
    p.add_argument("--group", required=True)
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--basis", default=None)
    p.add_argument("--prefix", default=None, help="explicit unitary-part prefix file")
    p.add_argument("--jobs", type=int, default=1)

    p = verb("verify", cmd_verify, "replay the checks of a decomposition")
    p.add_argument("--f", required=True)
    p.add_argument("--dec", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--basis", default=None, help="basis data file (default: shipped catalogue when available)")

    p = verb("galois-norm", cmd_galois_norm, "product of all Galois conjugates")
    p.add_argument("--f", required=True)
    p.add_argument("--group", default="gamma0:1")

    p = verb("k-op", cmd_k_op, "conjugate the Fourier coefficients (Hecke K)")
    p.add_argument("--f", required=True)
    p.add_argument("--group", required=True)

    p = verb("denom-primes", cmd_denom_primes, "primes dividing coefficient denominators")
    p.add_argument("--f", required=True)
    p.add_argument("--group", default="gamma0:1")

    p = verb("validate-basis", cmd_validate_basis, "diagnostic checks on a cusp form basis")
    p.add_argument("--group", required=True)
    p.add_argument("--basis", default=None)
    p.add_argument("--prec", type=int, default=12)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        payload = args.handler(args)
    except GmfError as exc:
        print(jsonio.dumps({"error_kind": exc.kind, "message": str(exc)}))
        return 2
    except (ValueError, TypeError, KeyError, OverflowError) as exc:
        print(jsonio.dumps({"error_kind": "malformed-input", "message": str(exc)}))
        return 2
    text = jsonio.dumps(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
