"""Canonical decomposition of parabolic generalized modular functions.

A normalized PGMF factors uniquely as f = f1 * f0 where f1 (the unitary
part) has unitary character and f0 (the empty-divisor part) has no zeros
or poles; f0 = 1 + ... and its logarithmic derivative g0 is a weight-2
cusp form with rational coefficients once a rational basis is fixed.

Everything here works at the expansion level.  The character itself is
never materialized: each operation needed on it is expressible on the
q-expansion, and the leading coefficients of f1 pin the whole
decomposition down.  Given the first kappa+1 coefficients of f1, the
cofactor coefficients a0(n) come out of the product recursion, the
coefficients b0(n) of g0 out of the logarithmic-derivative recursion, g0
itself out of an exact overdetermined solve against the basis (the
leading kappa x d coefficient matrix has full column rank), and then
f0 = exp of the integrated g0 and f1 = f / f0 to any precision f
supports.  An inconsistent solve is first-class data: it certifies that
the supplied prefix is not the leading part of any decomposition.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    CorruptBasisError,
    GroupMismatchError,
    IncompatibleSeriesError,
    MalformedInputError,
    NotCyclotomicError,
    NotNormalizedError,
    PrecisionError,
    PrefixInconsistentError,
    UnsupportedGroupError,
)
from .etaforms import CuspFormBasis
from .linalg import solve_full_column_rank
from .numberfield import denominator_primes, is_rational
from .qseries import QExpansion, exp_from_logderiv, first_disagreement
from .subgroup import GroupDescriptor, j_normalizes, kappa


@dataclass(frozen=True)
class PGMF:
    """A q-expansion attached to a congruence subgroup."""

    expansion: QExpansion
    group: GroupDescriptor

    @property
    def normalized(self) -> bool:
        """Leading coefficient equal to 1."""
        e = self.expansion
        return (not e.is_zero) and e.coeffs[0] == e.field.one


@dataclass(frozen=True)
class InconsistencyWitness:
    """First coefficient row at which a prefix fails to fit.

    ``row`` is the exponent n of the failing b0(n); ``residual`` is the
    mismatch b0(n) - (fitted combination)(n) when that value is rational.
    """

    row: int
    residual: Fraction | None
    reason: str


@dataclass(frozen=True)
class FitResult:
    coords: tuple | None
    witness: InconsistencyWitness | None

    @property
    def consistent(self) -> bool:
        return self.witness is None


@dataclass(frozen=True)
class CanonicalDecomposition:
    """The triple certifying f = f1 * f0 to working precision."""

    f1: PGMF
    f0: PGMF
    g0: QExpansion
    basis_coords: tuple


class CertificateVerdict(enum.Enum):
    CONSISTENT_WITH_FINITE_ORDER = "finite-order-consistent"
    NONTRIVIAL_EMPTY_DIVISOR_PART = "nontrivial-f0"
    PREFIX_INCONSISTENT = "prefix-inconsistent"


@dataclass(frozen=True)
class Certificate:
    verdict: CertificateVerdict
    decomposition: CanonicalDecomposition | None
    witness: InconsistencyWitness | None


@dataclass(frozen=True)
class DenominatorReport:
    primes: frozenset
    from_cyclotomic_coordinates: bool


# ----------------------------------------------------------------------
# prefix recursions


def cofactor_prefix(f: PGMF, f1_prefix, kap: int):
    """Coefficients a0(0..kappa) solving a(h+n) = sum a1(h+j) a0(n-j).

    ``f1_prefix`` holds a1(h..h+kappa) with a1(h) = 1; both f and the
    prefix must be normalized.
    """
    if kap < 0:
        raise MalformedInputError("kappa must be nonnegative")
    e = f.expansion
    if not f.normalized:
        raise NotNormalizedError("f must have leading coefficient 1")
    field = e.field
    prefix = [field.coerce(x) for x in f1_prefix]
    if len(prefix) != kap + 1:
        raise MalformedInputError(
            f"prefix must have length kappa+1 = {kap + 1}, got {len(prefix)}"
        )
    if prefix[0] != field.one:
        raise NotNormalizedError("prefix must start with 1")
    h = e.lead
    if e.precision < h + kap + 1:
        raise PrecisionError(
            f"need {kap + 1} coefficients of f from its lead, have {e.precision - h}"
        )
    a0 = [field.one]
    for n in range(1, kap + 1):
        acc = e.coeff(h + n)
        for j in range(1, n + 1):
            if prefix[j]:
                acc = acc - prefix[j] * a0[n - j]
        a0.append(acc)
    return a0


def logderiv_prefix(a0):
    """Coefficients b0(1..kappa) from n a0(n) = sum_{k<=n} b0(k) a0(n-k)."""
    if not a0 or a0[0] != 1:
        raise NotNormalizedError("a0 must start with 1")
    b0 = []
    for n in range(1, len(a0)):
        acc = n * a0[n]
        for k in range(1, n):
            if a0[n - k]:
                acc = acc - b0[k - 1] * a0[n - k]
        b0.append(acc)
    return b0


def fit_cusp_form(b0_prefix, basis: CuspFormBasis) -> FitResult:
    """Exact solve of the leading-coefficient system A c = b0.

    Rows are indexed by the exponent n = 1..len(b0); by the validated
    rank invariant the solution is unique when one exists.  The first
    failing row is returned as a witness, which is the structural signal
    that the supplied unitary-part prefix belongs to no decomposition.
    """
    d = basis.dimension
    if d > len(b0_prefix):
        raise CorruptBasisError(
            f"basis dimension {d} exceeds the {len(b0_prefix)} available rows"
        )
    b = []
    for i, x in enumerate(b0_prefix):
        ok, value = is_rational(x)
        if not ok:
            return FitResult(
                None,
                InconsistencyWitness(
                    row=i + 1, residual=None, reason="coefficient is not rational-valued"
                ),
            )
        b.append(value)
    if d == 0:
        for i, value in enumerate(b):
            if value:
                return FitResult(
                    None,
                    InconsistencyWitness(
                        row=i + 1,
                        residual=value,
                        reason="no cusp forms exist but the prefix forces a nonzero g0",
                    ),
                )
        return FitResult((), None)
    a_rows = [[form.coeff(n) for form in basis.forms] for n in range(1, len(b) + 1)]
    x, bad = solve_full_column_rank(a_rows, b)
    if bad is not None:
        residual = b[bad] - sum(a_rows[bad][j] * x[j] for j in range(d))
        return FitResult(
            None,
            InconsistencyWitness(
                row=bad + 1, residual=residual, reason="row contradicts the unique fit"
            ),
        )
    return FitResult(tuple(x), None)


# ----------------------------------------------------------------------
# decomposition


def decompose_with_prefix(
    f: PGMF, f1_prefix, basis: CuspFormBasis, target_precision: int
) -> CanonicalDecomposition:
    """Reconstruct the canonical decomposition from the unitary-part prefix.

    Pipeline: prefix -> a0 prefix -> b0 prefix -> g0 (exact basis fit)
    -> f0 = exp of the integrated g0 -> f1 = f / f0.  When the cusp form
    space is trivial this collapses to f1 = f, f0 = 1 (with the prefix
    checked against f, so a wrong prefix still surfaces as a witness).

    Raises PrefixInconsistentError when the fit has no solution, and
    PrecisionError when f, the basis, or the prefix cannot support the
    requested precision.
    """
    if basis.group != f.group:
        raise GroupMismatchError(f"basis is for {basis.group}, f is on {f.group}")
    e = f.expansion
    kap = max(kappa(f.group), 0)
    h = e.lead
    if e.precision < target_precision:
        raise PrecisionError(
            f"f is known to precision {e.precision}, below target {target_precision}"
        )
    a0 = cofactor_prefix(f, f1_prefix, kap)
    b0 = logderiv_prefix(a0)
    fit = fit_cusp_form(b0, basis)
    if not fit.consistent:
        raise PrefixInconsistentError(fit.witness)
    coords = fit.coords

    working = target_precision - min(h, 0)
    g0 = QExpansion.zero(e.level, working)
    for c, form in zip(coords, basis.forms):
        if form.level != e.level:
            raise IncompatibleSeriesError(
                f"basis forms live at level {form.level}, f at level {e.level}"
            )
        if form.precision < working:
            raise PrecisionError(
                f"basis precision {form.precision} below working precision {working}"
            )
        if c:
            g0 = g0 + form.truncate(working).scale(c)

    f0 = exp_from_logderiv(g0, working)
    if f0.field != e.field:
        f0 = f0.promote(e.field)
    f1 = e.divide(f0, target_precision)
    return CanonicalDecomposition(
        f1=PGMF(f1, f.group),
        f0=PGMF(f0.truncate(target_precision), f.group),
        g0=g0.truncate(target_precision),
        basis_coords=coords,
    )


def verify_decomposition(f: PGMF, dec: CanonicalDecomposition, basis=None):
    """Replay the decomposition identities; diagnostic, never raises.

    Checks the product f1 * f0 against f, the logarithmic derivative of
    f0 against g0, and (when a basis is supplied) g0 against the fitted
    basis combination.  Each entry reports the first discrepant exponent.
    """
    checks = []
    e = f.expansion
    f1 = dec.f1.expansion
    f0 = dec.f0.expansion

    ok = (not f0.is_zero) and f0.lead == 0 and f0.coeffs[0] == f0.field.one
    checks.append(
        {
            "check": "f0-unit",
            "passed": ok,
            "detail": None if ok else "f0 does not start with constant term 1",
        }
    )

    ok = (not f1.is_zero) and f1.lead == e.lead and f1.coeffs[0] == f1.field.one
    checks.append(
        {
            "check": "f1-normalized",
            "passed": ok,
            "detail": None if ok else "f1 is not normalized at the lead of f",
        }
    )

    try:
        product = f1 * f0
        bad = first_disagreement(product, e)
    except IncompatibleSeriesError as exc:
        product, bad = None, None
        checks.append({"check": "product", "passed": False, "detail": str(exc)})
    else:
        checks.append(
            {
                "check": "product",
                "passed": bad is None,
                "detail": None if bad is None else f"first discrepant exponent {bad}",
            }
        )

    try:
        logd = f0.theta_logderiv()
        g0 = dec.g0 if dec.g0.field == logd.field else dec.g0.promote(logd.field)
        bad = first_disagreement(logd, g0)
        checks.append(
            {
                "check": "logderiv",
                "passed": bad is None,
                "detail": None if bad is None else f"first discrepant exponent {bad}",
            }
        )
    except (IncompatibleSeriesError, NotNormalizedError) as exc:
        checks.append({"check": "logderiv", "passed": False, "detail": str(exc)})

    if basis is None:
        checks.append(
            {"check": "basis-fit", "passed": None, "detail": "skipped: no basis supplied"}
        )
    else:
        if len(dec.basis_coords) != basis.dimension:
            checks.append(
                {
                    "check": "basis-fit",
                    "passed": False,
                    "detail": f"{len(dec.basis_coords)} coordinates for dimension {basis.dimension}",
                }
            )
        else:
            combo = QExpansion.zero(dec.g0.level, dec.g0.precision)
            try:
                for c, form in zip(dec.basis_coords, basis.forms):
                    if c:
                        combo = combo + form.truncate(
                            min(form.precision, dec.g0.precision)
                        ).scale(c)
                bad = first_disagreement(combo, dec.g0)
                checks.append(
                    {
                        "check": "basis-fit",
                        "passed": bad is None,
                        "detail": None if bad is None else f"first discrepant exponent {bad}",
                    }
                )
            except (IncompatibleSeriesError, PrecisionError) as exc:
                checks.append({"check": "basis-fit", "passed": False, "detail": str(exc)})
    return checks


def all_checks_passed(report) -> bool:
    return all(entry["passed"] is not False for entry in report)


def self_prefix(f: PGMF, kap: int):
    """f's own leading kappa+1 coefficients (f must be normalized)."""
    e = f.expansion
    if not f.normalized:
        raise NotNormalizedError("f must have leading coefficient 1")
    h = e.lead
    if e.precision < h + kap + 1:
        raise PrecisionError(
            f"need {kap + 1} leading coefficients of f, have {e.precision - h}"
        )
    return [e.coeff(h + j) for j in range(kap + 1)]


def finite_order_certificate(
    f: PGMF, basis: CuspFormBasis, target_precision: int, prefix=None
) -> Certificate:
    """Classify f against the finite-order hypothesis at expansion level.

    A character of finite order forces f = f1, so by default the
    decomposition is attempted with f's own leading coefficients as the
    unitary-part prefix; that run must come back with f0 = 1.  Passing an
    explicit ``prefix`` instead encodes outside knowledge of the unitary
    part: a consistent fit with nontrivial f0 then certifies (contrapositive
    of the easy direction) that the character cannot have finite order if
    the data is exact, and an inconsistent fit refutes the prefix itself.

    The positive verdict is deliberately "consistent with": no finite
    amount of expansion data can prove finite order.
    """
    kap = max(kappa(f.group), 0)
    if prefix is None:
        prefix = self_prefix(f, kap)
    try:
        dec = decompose_with_prefix(f, prefix, basis, target_precision)
    except PrefixInconsistentError as exc:
        return Certificate(
            verdict=CertificateVerdict.PREFIX_INCONSISTENT,
            decomposition=None,
            witness=exc.witness,
        )
    if any(dec.basis_coords):
        return Certificate(
            verdict=CertificateVerdict.NONTRIVIAL_EMPTY_DIVISOR_PART,
            decomposition=dec,
            witness=None,
        )
    return Certificate(
        verdict=CertificateVerdict.CONSISTENT_WITH_FINITE_ORDER,
        decomposition=dec,
        witness=None,
    )


# ----------------------------------------------------------------------
# Galois norms and the conjugation operator


def galois_norm(f: PGMF) -> PGMF:
    """Product of all Galois conjugates; lands in rational coefficients.

    For a series over Q(zeta_m) this multiplies the images under
    zeta -> zeta^k over all k coprime to m, so every coefficient of the
    result is Galois-stable, hence rational; the output is retagged
    accordingly and its lead is phi(m) times the input lead.
    """
    e = f.expansion
    if e.field.is_rational_field:
        raise NotCyclotomicError("galois_norm needs a cyclotomic-tagged series")
    m = e.field.conductor
    acc = None
    for k in range(1, m + 1):
        if gcd(k, m) != 1:
            continue
        image = e.galois_map(k)
        acc = image if acc is None else acc * image
    return PGMF(acc.as_rational_series(), f.group)


def k_operator(f: PGMF) -> PGMF:
    """Hecke conjugation operator on expansions: conjugate every Fourier
    coefficient.  Requires diag(-1,1) to normalize the group, so that the
    image is again a form on the same group."""
    if not j_normalizes(f.group):
        raise UnsupportedGroupError(
            f"diag(-1,1) does not normalize {f.group}; the image leaves the group"
        )
    return PGMF(f.expansion.conjugate_coeffs(), f.group)


def pgmf_product(f: PGMF, g: PGMF) -> PGMF:
    if f.group != g.group:
        raise GroupMismatchError(f"cannot multiply forms on {f.group} and {g.group}")
    return PGMF(f.expansion * g.expansion, f.group)


def pgmf_power(f: PGMF, m: int) -> PGMF:
    return PGMF(f.expansion ** m, f.group)


def denominator_prime_report(f: PGMF) -> DenominatorReport:
    """Primes dividing any known coefficient denominator.

    Over a cyclotomic field the primes of the power-basis coordinate
    denominators are reported instead, flagged as such.
    """
    e = f.expansion
    primes = set()
    if e.field.is_rational_field:
        for c in e.coeffs:
            primes |= denominator_primes(c)
        return DenominatorReport(frozenset(primes), False)
    for c in e.coeffs:
        for coord in c.coords:
            primes |= denominator_primes(coord)
    return DenominatorReport(frozenset(primes), True)


# ----------------------------------------------------------------------
# JSON shapes


def witness_to_obj(witness: InconsistencyWitness) -> dict:
    from .jsonio import format_rational

    return {
        "row": witness.row,
        "residual": None if witness.residual is None else format_rational(witness.residual),
        "reason": witness.reason,
    }


def decomposition_to_obj(dec: CanonicalDecomposition, checks=None) -> dict:
    from .jsonio import format_rational, series_to_obj

    obj = {
        "f1": series_to_obj(dec.f1.expansion),
        "f0": series_to_obj(dec.f0.expansion),
        "g0": series_to_obj(dec.g0),
        "basis_coords": [format_rational(c) for c in dec.basis_coords],
    }
    if checks is not None:
        obj["checks"] = checks
    return obj


def decomposition_from_obj(obj, group: GroupDescriptor) -> CanonicalDecomposition:
    from .jsonio import parse_rational, series_from_obj

    missing = {"f1", "f0", "g0", "basis_coords"} - set(obj)
    if missing:
        raise MalformedInputError(f"decomposition object missing keys: {sorted(missing)}")
    return CanonicalDecomposition(
        f1=PGMF(series_from_obj(obj["f1"]), group),
        f0=PGMF(series_from_obj(obj["f0"]), group),
        g0=series_from_obj(obj["g0"]),
        basis_coords=tuple(parse_rational(c) for c in obj["basis_coords"]),
    )


def certificate_to_obj(cert: Certificate) -> dict:
    if cert.verdict is CertificateVerdict.PREFIX_INCONSISTENT:
        detail = {"witness": witness_to_obj(cert.witness)}
    else:
        detail = {"decomposition": decomposition_to_obj(cert.decomposition)}
    return {"verdict": cert.verdict.value, "detail": detail}
