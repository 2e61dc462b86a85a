from fractions import Fraction

import pytest

from gmfkit.qseries import QExpansion, first_disagreement


def series_agree(f: QExpansion, g: QExpansion) -> bool:
    """Equality wherever both series are known."""
    return first_disagreement(f, g) is None


def assert_agree(f: QExpansion, g: QExpansion):
    bad = first_disagreement(f, g)
    assert bad is None, f"series disagree first at exponent {bad}:\n  {f}\n  {g}"


@pytest.fixture
def qs():
    """Shortcut builder for level-1 rational series."""

    def build(lead, coeffs, precision=None):
        return QExpansion(1, lead, [Fraction(c) for c in coeffs], precision)

    return build
