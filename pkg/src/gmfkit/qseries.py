"""Truncated Laurent series in q_N = e^(2 pi i z / N) with exact coefficients.

A series stores an absolute precision: ``coeffs[i]`` is the coefficient
of q_N^(lead + i), exponents lead .. precision-1 are known exactly, and
nothing is asserted at precision or beyond.  The leading coefficient is
always nonzero except for the distinguished zero series, which has empty
coefficients and lead == precision.

Precision contracts (h = lead, P = precision, M = P - h the relative
precision):

* ``f + g``            P = min(P_f, P_g)
* ``f * g``            P = min(P_f + h_g, P_g + h_f); M = min(M_f, M_g)
* ``f.inverse(T)``     P = min(T, P_f - 2 h_f), lead -h_f
* ``f.theta_logderiv``  P = P_f - h_f, lead 0 (constant term h_f)
* ``exp_from_logderiv(g, T)``  P = min(T, P_g), lead 0
* ``f ** m``           relative precision M preserved, lead m h_f
* ``f.rescale_level(L)``  exponents and P scale by L / N
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    BadLevelError,
    DivisionByZeroSeriesError,
    IncompatibleSeriesError,
    NotExponentiableError,
    NotRationalError,
    PrecisionError,
)
from .numberfield import RATIONAL, FieldTag, conjugate, galois_apply, is_rational


class QExpansion:
    """Exact truncated Laurent series at the infinite cusp."""

    __slots__ = ("level", "lead", "precision", "coeffs", "field")

    def __init__(self, level, lead, coeffs, precision=None, field=RATIONAL):
        if not isinstance(level, int) or level < 1:
            raise BadLevelError(f"level must be a positive integer, got {level!r}")
        coeffs = [field.coerce(c) for c in coeffs]
        if precision is None:
            precision = lead + len(coeffs)
        window = precision - lead
        if window < len(coeffs):
            raise PrecisionError(
                f"{len(coeffs)} coefficients do not fit in window [{lead}, {precision})"
            )
        if window > len(coeffs):  # explicit padding: caller asserts exact zeros
            zero = field.zero
            coeffs = coeffs + [zero] * (window - len(coeffs))
        strip = 0
        while strip < len(coeffs) and not coeffs[strip]:
            strip += 1
        if strip == len(coeffs):
            lead, coeffs = precision, []
        elif strip:
            lead += strip
            coeffs = coeffs[strip:]
        self.level = level
        self.lead = lead
        self.precision = precision
        self.coeffs = tuple(coeffs)
        self.field = field

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, level, precision, field=RATIONAL):
        return cls(level, precision, [], precision, field)

    @classmethod
    def one(cls, level, precision, field=RATIONAL):
        return cls(level, 0, [1], precision, field)

    @classmethod
    def monomial(cls, level, exponent, precision=None, field=RATIONAL, coefficient=1):
        if precision is None:
            precision = exponent + 1
        return cls(level, exponent, [coefficient], precision, field)

    # ------------------------------------------------------------------
    # basic accessors

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def relative_precision(self) -> int:
        return self.precision - self.lead

    def coeff(self, n: int):
        """Coefficient of q_N^n; zero below the lead, error at or past precision."""
        if n >= self.precision:
            raise PrecisionError(f"coefficient of exponent {n} unknown (precision {self.precision})")
        if n < self.lead:
            return self.field.zero
        return self.coeffs[n - self.lead]

    def truncate(self, precision: int) -> "QExpansion":
        if precision > self.precision:
            raise PrecisionError(
                f"cannot extend precision {self.precision} to {precision}"
            )
        if precision == self.precision:
            return self
        if precision <= self.lead:
            return QExpansion.zero(self.level, precision, self.field)
        return QExpansion(
            self.level, self.lead, self.coeffs[: precision - self.lead], precision, self.field
        )

    def _require_compatible(self, other):
        if not isinstance(other, QExpansion):
            raise TypeError(f"expected a QExpansion, got {type(other).__name__}")
        if self.level != other.level:
            raise IncompatibleSeriesError(
                f"level mismatch: {self.level} vs {other.level}; rescale first"
            )
        if self.field != other.field:
            raise IncompatibleSeriesError(
                f"field mismatch: {self.field!r} vs {other.field!r}; promote first"
            )

    # ------------------------------------------------------------------
    # ring operations

    def __add__(self, other):
        self._require_compatible(other)
        precision = min(self.precision, other.precision)
        lead = min(self.lead, other.lead)
        if lead >= precision:
            return QExpansion.zero(self.level, precision, self.field)
        out = []
        for n in range(lead, precision):
            a = self.coeffs[n - self.lead] if self.lead <= n else self.field.zero
            b = other.coeffs[n - other.lead] if other.lead <= n else other.field.zero
            out.append(a + b)
        return QExpansion(self.level, lead, out, precision, self.field)

    def __neg__(self):
        return QExpansion(
            self.level, self.lead, [-c for c in self.coeffs], self.precision, self.field
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._require_compatible(other)
        precision = min(self.precision + other.lead, other.precision + self.lead)
        if self.is_zero or other.is_zero:
            return QExpansion.zero(self.level, precision, self.field)
        lead = self.lead + other.lead
        size = precision - lead
        zero = self.field.zero
        out = [zero] * size
        bcoeffs = other.coeffs
        for i, a in enumerate(self.coeffs):
            if i >= size:
                break
            if not a:
                continue
            jmax = min(len(bcoeffs), size - i)
            for j in range(jmax):
                b = bcoeffs[j]
                if b:
                    out[i + j] += a * b
        return QExpansion(self.level, lead, out, precision, self.field)

    def scale(self, scalar) -> "QExpansion":
        """Multiply every coefficient by a fixed field element."""
        scalar = self.field.coerce(scalar)
        if not scalar:
            return QExpansion.zero(self.level, self.precision, self.field)
        return QExpansion(
            self.level, self.lead, [scalar * c for c in self.coeffs], self.precision, self.field
        )

    def shift(self, k: int) -> "QExpansion":
        """Multiply by q_N^k (shift all exponents by k)."""
        if self.is_zero:
            return QExpansion.zero(self.level, self.precision + k, self.field)
        return QExpansion(
            self.level, self.lead + k, list(self.coeffs), self.precision + k, self.field
        )

    def inverse(self, target_precision=None) -> "QExpansion":
        """Multiplicative inverse; lead -h, precision min(target, P - 2h)."""
        if self.is_zero:
            raise DivisionByZeroSeriesError("inverse of the zero series")
        h = self.lead
        available = self.precision - 2 * h
        precision = available if target_precision is None else min(target_precision, available)
        if precision <= -h:
            raise PrecisionError("no coefficients of the inverse are determined")
        terms = precision + h
        inv0 = self.coeffs[0] ** -1
        out = [inv0]
        u = self.coeffs
        for n in range(1, terms):
            acc = None
            for k in range(1, min(n, len(u) - 1) + 1):
                if not u[k]:
                    continue
                t = u[k] * out[n - k]
                acc = t if acc is None else acc + t
            out.append(-inv0 * acc if acc is not None else self.field.zero)
        return QExpansion(self.level, -h, out, precision, self.field)

    def divide(self, other: "QExpansion", target_precision=None) -> "QExpansion":
        """self / other by one direct recursion; agrees with
        self * other.inverse() but skips the intermediate series."""
        self._require_compatible(other)
        if other.is_zero:
            raise DivisionByZeroSeriesError("division by the zero series")
        available = min(
            self.precision - other.lead,
            other.precision + self.lead - 2 * other.lead,
        )
        precision = available if target_precision is None else min(target_precision, available)
        lead = self.lead - other.lead
        if self.is_zero or precision <= lead:
            return QExpansion.zero(self.level, precision, self.field)
        terms = precision - lead
        g = other.coeffs
        inv0 = g[0] ** -1
        out = []
        for n in range(terms):
            acc = self.coeffs[n] if n < len(self.coeffs) else self.field.zero
            for j in range(1, min(n, len(g) - 1) + 1):
                if g[j] and out[n - j]:
                    acc = acc - g[j] * out[n - j]
            out.append(inv0 * acc)
        return QExpansion(self.level, lead, out, precision, self.field)

    def __pow__(self, m):
        if not isinstance(m, int):
            return NotImplemented
        if m == 0:
            if self.is_zero:
                return QExpansion.one(self.level, max(self.precision, 1), self.field)
            return QExpansion.one(self.level, self.relative_precision, self.field)
        if m < 0:
            return self.inverse() ** (-m)
        result = None
        base = self
        e = m
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # ------------------------------------------------------------------
    # logarithmic derivative and friends

    def theta(self) -> "QExpansion":
        """Apply q d/dq: multiply the coefficient of q_N^n by n."""
        return QExpansion(
            self.level,
            self.lead,
            [(self.lead + i) * c for i, c in enumerate(self.coeffs)],
            self.precision,
            self.field,
        )

    def theta_logderiv(self) -> "QExpansion":
        """(q d/dq f) / f.

        For f = q^h (c + ...) the result is the constant h plus a series
        with positive exponents; it does not depend on the scale c.
        """
        if self.is_zero:
            raise DivisionByZeroSeriesError("logarithmic derivative of the zero series")
        terms = self.relative_precision
        inv0 = self.coeffs[0] ** -1
        u = [c * inv0 for c in self.coeffs]
        bs = []
        for n in range(1, terms):
            acc = n * u[n]
            for k in range(1, n):
                if u[n - k]:
                    acc = acc - bs[k - 1] * u[n - k]
            bs.append(acc)
        out = [self.field.coerce(self.lead)] + bs
        return QExpansion(self.level, 0, out, terms, self.field)

    # ------------------------------------------------------------------
    # level changes

    def rescale_level(self, new_level: int) -> "QExpansion":
        """Re-express at a finer level: q_N = q_L^(L/N), exponents scale by L/N."""
        if new_level % self.level != 0:
            raise BadLevelError(f"{new_level} is not a multiple of level {self.level}")
        c = new_level // self.level
        if c == 1:
            return self
        if self.is_zero:
            return QExpansion.zero(new_level, c * self.precision, self.field)
        zero = self.field.zero
        out = [zero] * (c * (len(self.coeffs) - 1) + 1)
        for i, a in enumerate(self.coeffs):
            out[c * i] = a
        return QExpansion(new_level, c * self.lead, out, c * self.precision, self.field)

    def reduce_level(self, new_level: int) -> "QExpansion":
        """Inverse of rescale_level; every known exponent must lie on the
        coarser lattice."""
        if self.level % new_level != 0:
            raise BadLevelError(f"{new_level} does not divide level {self.level}")
        c = self.level // new_level
        if c == 1:
            return self
        precision = -(-self.precision // c)
        if self.is_zero:
            return QExpansion.zero(new_level, precision, self.field)
        out = []
        for i, a in enumerate(self.coeffs):
            e = self.lead + i
            if e % c == 0:
                out.append(a)
            elif a:
                raise BadLevelError(
                    f"coefficient at exponent {e} blocks reduction by {c}"
                )
        if self.lead % c != 0:
            raise BadLevelError(f"lead {self.lead} is not a multiple of {c}")
        return QExpansion(new_level, self.lead // c, out, precision, self.field)

    def substitute_power(self, d: int) -> "QExpansion":
        """Replace q by q^d at the same level (z -> d z on expansions)."""
        if d < 1:
            raise ValueError("substitution exponent must be positive")
        if d == 1:
            return self
        if self.is_zero:
            return QExpansion.zero(self.level, d * self.precision, self.field)
        zero = self.field.zero
        out = [zero] * (d * (len(self.coeffs) - 1) + 1)
        for i, a in enumerate(self.coeffs):
            out[d * i] = a
        return QExpansion(self.level, d * self.lead, out, d * self.precision, self.field)

    # ------------------------------------------------------------------
    # coefficient field maps

    def galois_map(self, k: int) -> "QExpansion":
        """Apply zeta -> zeta^k to every coefficient; identity over Q."""
        if self.field.is_rational_field:
            return self
        return QExpansion(
            self.level,
            self.lead,
            [galois_apply(c, k) for c in self.coeffs],
            self.precision,
            self.field,
        )

    def conjugate_coeffs(self) -> "QExpansion":
        """Complex-conjugate every coefficient (zeta -> zeta^(-1))."""
        if self.field.is_rational_field:
            return self
        return QExpansion(
            self.level,
            self.lead,
            [conjugate(c) for c in self.coeffs],
            self.precision,
            self.field,
        )

    def promote(self, field: FieldTag) -> "QExpansion":
        """Embed a rational-tagged series into Q(zeta_m)."""
        if field == self.field:
            return self
        if not self.field.is_rational_field or field.is_rational_field:
            raise IncompatibleSeriesError(
                f"no promotion from {self.field!r} to {field!r}"
            )
        return QExpansion(self.level, self.lead, list(self.coeffs), self.precision, field)

    def as_rational_series(self) -> "QExpansion":
        """Retag with Q; every coefficient must be rational-valued."""
        if self.field.is_rational_field:
            return self
        out = []
        for i, c in enumerate(self.coeffs):
            ok, value = is_rational(c)
            if not ok:
                raise NotRationalError(
                    f"coefficient at exponent {self.lead + i} is not rational"
                )
            out.append(value)
        return QExpansion(self.level, self.lead, out, self.precision, RATIONAL)

    # ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (
            self.level == other.level
            and self.field == other.field
            and self.lead == other.lead
            and self.precision == other.precision
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.level, self.field, self.lead, self.precision, self.coeffs))

    def __repr__(self):
        var = "q" if self.level == 1 else f"q{self.level}"
        if self.is_zero:
            return f"QExpansion(0 + O({var}^{self.precision}))"
        parts = []
        shown = 0
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.lead + i
            if shown == 6:
                parts.append("...")
                break
            if e == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*{var}^{e}")
            shown += 1
        body = " + ".join(parts) if parts else "0"
        return f"QExpansion({body} + O({var}^{self.precision}))"


def exp_from_logderiv(g: QExpansion, target_precision: int) -> QExpansion:
    """The unique f = 1 + ... with theta_logderiv(f) = g.

    Solves n a(n) = sum_{k=1}^{n} b(k) a(n-k) upward from a(0) = 1; g must
    have no constant or negative-exponent terms.
    """
    if not g.is_zero and g.lead < 1:
        raise NotExponentiableError(
            f"series with a term at exponent {g.lead} has no unit exponential"
        )
    precision = min(target_precision, g.precision)
    if precision < 1:
        raise PrecisionError("target precision leaves no coefficients determined")
    field = g.field
    zero = field.zero
    bs = [zero] * precision
    for i, c in enumerate(g.coeffs):
        e = g.lead + i
        if 1 <= e < precision:
            bs[e] = c
    a = [field.one]
    for n in range(1, precision):
        acc = None
        for k in range(1, n + 1):
            b = bs[k]
            if not b:
                continue
            if a[n - k]:
                t = b * a[n - k]
                acc = t if acc is None else acc + t
        a.append(Fraction(1, n) * acc if acc is not None else zero)
    return QExpansion(g.level, 0, a, precision, field)


def first_disagreement(f: QExpansion, g: QExpansion):
    """Smallest exponent where two series (same level/field) are known to
    differ, or None if they agree wherever both are known."""
    f._require_compatible(g)
    stop = min(f.precision, g.precision)
    start = min(f.lead, g.lead)
    for n in range(start, stop):
        a = f.coeffs[n - f.lead] if f.lead <= n else f.field.zero
        b = g.coeffs[n - g.lead] if g.lead <= n else g.field.zero
        if a != b:
            return n
    return None
