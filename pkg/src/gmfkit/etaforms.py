"""Dedekind eta expansions, eta quotients, and weight-2 cusp form bases.

The eta function is never stored as data: everything regenerates from the
pentagonal-number expansion of the Euler product prod (1 - q^n).  An eta
quotient prod eta(d z)^(r_d) on ambient level N naturally lives at level
24 N; its exponent support is an arithmetic progression of stride 24 N,
so the expansion is assembled from unit series at level 1 and re-expanded
at the coarsest level that accommodates the lead, which lands classical
integer-weight quotients (like the shipped basis forms) at level 1.

The shipped basis catalogue covers the genus-one Gamma_0(N) whose
one-dimensional space of weight-2 cusp forms is spanned by a known eta
quotient, plus the classical genus-zero levels where the space is 0.
Anything else comes in through basis data files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    CorruptBasisError,
    MalformedInputError,
    NoBasisAvailableError,
    PrecisionError,
)
from .linalg import rank
from .qseries import QExpansion
from .subgroup import GAMMA, GAMMA0, GAMMA1, GroupDescriptor, kappa


def euler_product(terms: int) -> QExpansion:
    """prod_{n>=1} (1 - q^n) to the given number of terms, at level 1.

    Pentagonal number theorem: the coefficient of q^e is (-1)^k when
    e = k(3k -+ 1)/2 and zero otherwise.
    """
    if terms < 1:
        raise PrecisionError("need at least one term")
    coeffs = [0] * terms
    coeffs[0] = 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= terms and e2 >= terms:
            break
        sign = -1 if k % 2 else 1
        if e1 < terms:
            coeffs[e1] = sign
        if e2 < terms:
            coeffs[e2] = sign
        k += 1
    return QExpansion(1, 0, coeffs, terms)


def eta_expansion(precision: int) -> QExpansion:
    """eta(z) at level 24: q24 * sum_k (-1)^k q24^(12 k (3k-1)), i.e.
    support on the odd squares (6k-1)^2."""
    if precision <= 1:
        raise PrecisionError("precision must exceed the lead exponent 1")
    nterms = (precision - 2) // 24 + 1
    unit = euler_product(nterms)
    coeffs = [0] * (precision - 1)
    for j, c in enumerate(unit.coeffs):
        e = 24 * j + 1
        if e < precision and c:
            coeffs[e - 1] = c
    return QExpansion(24, 1, coeffs, precision)


@dataclass(frozen=True)
class EtaQuotient:
    """prod_d eta(d z)^(r_d) with every divisor d dividing the ambient level.

    Construction consolidates repeated divisors and drops zero exponents;
    the empty quotient is the constant 1.
    """

    terms: tuple
    ambient_level: int | None = None

    def __post_init__(self):
        merged: dict[int, int] = {}
        for d, r in self.terms:
            if d < 1:
                raise MalformedInputError(f"divisor must be positive, got {d}")
            merged[d] = merged.get(d, 0) + r
        terms = tuple(sorted((d, r) for d, r in merged.items() if r))
        ambient = self.ambient_level
        if ambient is None:
            ambient = math.lcm(*(d for d, _ in terms)) if terms else 1
        if not isinstance(ambient, int) or ambient < 1:
            raise MalformedInputError(f"bad ambient level {ambient!r}")
        for d, _ in terms:
            if ambient % d != 0:
                raise MalformedInputError(
                    f"divisor {d} does not divide the ambient level {ambient}"
                )
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "ambient_level", ambient)

    @classmethod
    def parse(cls, text: str, ambient_level: int | None = None) -> "EtaQuotient":
        """Parse the ``d1^r1 d2^r2 ...`` syntax, e.g. ``1^2 11^2``."""
        pairs = []
        for token in text.replace("−", "-").split():
            base, sep, exp = token.partition("^")
            try:
                d = int(base)
                r = int(exp) if sep else 1
            except ValueError:
                raise MalformedInputError(f"bad eta quotient token {token!r}") from None
            pairs.append((d, r))
        if not pairs:
            raise MalformedInputError("empty eta quotient expression")
        return cls(tuple(pairs), ambient_level)

    def __str__(self):
        return " ".join(f"{d}^{r}" for d, r in self.terms) if self.terms else "1^0"


def eta_quotient_expansion(eq: EtaQuotient, precision: int) -> QExpansion:
    """Expansion of an eta quotient, at the coarsest level its exponent
    lattice allows; ``precision`` counts in the units of that level.

    At level L = 24 N the factor eta(d z)^r contributes lead N d r and
    increments in 24 N Z, so the quotient is q_L^s * w(q_1) with
    s = sum N d r_d and w a unit series at level 1.
    """
    n = eq.ambient_level
    big = 24 * n
    s = sum(n * d * r for d, r in eq.terms)
    step = math.gcd(big, s) if s else big
    out_level = big // step
    lead = s // step
    if precision <= lead:
        raise PrecisionError(
            f"precision {precision} does not reach past the lead exponent {lead}"
        )
    rel_terms = -(-(precision - lead) // out_level)
    bucket = -(-rel_terms // 32) * 32  # quantized for factor reuse
    unit = QExpansion.one(1, rel_terms)
    for d, r in eq.terms:
        unit = unit * _unit_factor(d, r, bucket).truncate(rel_terms)
    return unit.rescale_level(out_level).shift(lead).truncate(precision)


@lru_cache(maxsize=512)
def _unit_factor(d: int, r: int, terms: int) -> QExpansion:
    """prod_k (1 - q^(d k))^r as a unit series at level 1."""
    base = euler_product(-(-terms // d))
    return base.substitute_power(d).truncate(terms) ** r


# ----------------------------------------------------------------------
# Shipped cusp form bases

# Genus-one Gamma_0(N) whose newform is an eta quotient; all have a(1) = 1.
_GENUS_ONE_ETA = {
    11: ((1, 2), (11, 2)),
    14: ((1, 1), (2, 1), (7, 1), (14, 1)),
    15: ((1, 1), (3, 1), (5, 1), (15, 1)),
    20: ((2, 2), (10, 2)),
    24: ((2, 1), (4, 1), (6, 1), (12, 1)),
    27: ((3, 2), (9, 2)),
    32: ((4, 2), (8, 2)),
    36: ((6, 4),),
}

# Classical genus-zero levels: the weight-2 cusp form space is trivial.
_GENUS_ZERO = {
    GAMMA0: frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25}),
    GAMMA1: frozenset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12}),
    GAMMA: frozenset({1, 2, 3, 4, 5}),
}


@dataclass(frozen=True)
class CuspFormBasis:
    """Rational-coefficient basis of the weight-2 cusp forms of a group."""

    group: GroupDescriptor
    forms: tuple

    @property
    def dimension(self) -> int:
        return len(self.forms)


def shipped_levels():
    """Gamma_0 levels with a shipped one-dimensional eta-quotient basis."""
    return sorted(_GENUS_ONE_ETA)


def shipped_quotient(level: int) -> EtaQuotient:
    return EtaQuotient(_GENUS_ONE_ETA[level], level)


def load_basis(group: GroupDescriptor, precision: int, path=None) -> CuspFormBasis:
    """Basis expansions at the requested precision, regenerated from the
    shipped eta recipes or parsed from a data file; the leading-rank
    invariant is validated on load."""
    if path is not None:
        basis = _basis_from_file(group, precision, path)
    elif group.kind == GAMMA0 and group.level in _GENUS_ONE_ETA:
        form = eta_quotient_expansion(shipped_quotient(group.level), precision)
        basis = CuspFormBasis(group, (form,))
    elif group.level in _GENUS_ZERO[group.kind]:
        basis = CuspFormBasis(group, ())
    else:
        raise NoBasisAvailableError(
            f"no shipped basis for {group}; supply a basis data file"
        )
    report = validate_basis(basis)
    bad = [c for c in report if c["passed"] is False]
    if bad:
        raise CorruptBasisError(
            "basis failed validation: " + "; ".join(c["check"] for c in bad)
        )
    return basis


def _basis_from_file(group: GroupDescriptor, precision: int, path) -> CuspFormBasis:
    import json

    from . import jsonio

    with open(path, "r", encoding="utf-8") as handle:
        obj = json.load(handle)
    if not isinstance(obj, dict) or "group" not in obj or "forms" not in obj:
        raise MalformedInputError("basis file needs 'group' and 'forms' entries")
    file_group = GroupDescriptor.parse(obj["group"])
    if file_group != group:
        raise MalformedInputError(
            f"basis file is for {file_group}, requested {group}"
        )
    forms = []
    for entry in obj["forms"]:
        form = jsonio.series_from_obj(entry)
        if form.precision < precision:
            raise PrecisionError(
                f"basis form precision {form.precision} below requested {precision}"
            )
        forms.append(form.truncate(precision))
    return CuspFormBasis(group, tuple(forms))


def validate_basis(basis: CuspFormBasis):
    """Diagnostic checks; returns one entry per check, never raises."""
    checks = []
    forms = basis.forms
    d = len(forms)

    rational = all(f.field.is_rational_field for f in forms)
    checks.append(
        {
            "check": "rational-coefficients",
            "passed": rational,
            "detail": None if rational else "a form carries a cyclotomic field tag",
        }
    )

    leads_ok = all((not f.is_zero) and f.lead >= 1 for f in forms)
    checks.append(
        {
            "check": "positive-lead",
            "passed": leads_ok,
            "detail": None if leads_ok else "a form is zero or has lead < 1",
        }
    )

    levels_ok = len({f.level for f in forms}) <= 1
    checks.append(
        {
            "check": "uniform-level",
            "passed": levels_ok,
            "detail": None if levels_ok else "forms use different levels",
        }
    )

    kap = kappa(basis.group)
    bound_ok = d <= max(kap, 0)
    checks.append(
        {
            "check": "dimension-bound",
            "passed": bound_ok,
            "detail": f"dimension {d}, kappa {kap}",
        }
    )

    rank_ok = True
    detail = f"rank of the {max(kap, 0)}x{d} leading-coefficient matrix"
    if d > 0:
        if not rational or not leads_ok:
            rank_ok = False
            detail = "skipped: prior checks failed"
        else:
            try:
                matrix = [[f.coeff(nn) for f in forms] for nn in range(1, max(kap, 0) + 1)]
            except PrecisionError:
                rank_ok = False
                detail = f"forms too short to read {max(kap, 0)} leading coefficients"
            else:
                r = rank(matrix)
                rank_ok = r == d
                detail = f"rank {r} of the {max(kap, 0)}x{d} matrix, dimension {d}"
    checks.append({"check": "leading-rank", "passed": rank_ok, "detail": detail})
    return checks
