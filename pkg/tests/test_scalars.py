from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from haargpd.report import Check, Report, dumps
from haargpd.scalars import Gauss, format_rational, rational

q = st.fractions(max_denominator=30)
gauss = st.builds(Gauss, q, q)


def test_rational_parsing():
    assert rational("3/6") == Fraction(1, 2)
    assert format_rational(Fraction(4)) == "4/1"
    with pytest.raises(TypeError):
        rational(0.5)


def test_gauss_examples():
    z = Gauss(2, 1)
    assert z.conjugate() == Gauss(2, -1)
    assert z * z.conjugate() == 5
    assert z / z == 1
    assert Gauss(3) == Fraction(3) and hash(Gauss(3)) == hash(3)
    assert not Gauss()


@given(gauss, gauss, gauss)
def test_gauss_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a - a == 0
    if b:
        assert (a / b) * b == a


def test_report_json_is_sorted_and_exact():
    check = Check("demo")
    check.record(True, "unused")
    check.record(False, "broken")
    report = Report([check])
    assert report.violations == 1 and not report.ok and report["demo"] is check
    text = dumps({"b": Fraction(1, 3), "a": [Gauss(1, Fraction(1, 2))]})
    assert text.index('"a"') < text.index('"b"')
    assert '"1/3"' in text and '"1/2"' in text and text.endswith("\n")
