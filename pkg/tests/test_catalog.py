import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphere_crs.adjoint import beta
from sphere_crs.catalog import (BASE_FORMS, BETA, FREE, MU, PSI, AbstractPathType, angle_domain,
                                concrete_candidates, expand_concrete, format_form, junction_ok,
                                parse_form, sufficient_list)
from sphere_crs.errors import UnsupportedRegime
from sphere_crs.segments import ALL_KINDS

# Golden counts recorded at first implementation.
CONCRETE_COUNTS = {
    "C": 4, "G": 2, "T": 2, "CC": 4, "GC": 4, "CG": 4, "C|C": 4, "TC": 4, "CT": 4,
    "CC_p|C": 4, "C|C_pC": 4, "CGC": 8, "C|C_bG": 4, "GC_b|C": 4, "CTC": 8,
    "C|C_pC_p|C": 4, "CGC_b|C": 8, "C|C_bGC": 8, "CC_m|C_mC": 4, "C|C_bGC_b|C": 8,
    "C|C_mC_m|C_mC": 4, "CC_m|C_mC_m|C": 4, "CC_m|C_mC_m|C_mC": 4,
}
TOTAL_CONCRETE = 108


def test_seventeen_listed_forms():
    assert len(BASE_FORMS) == 17


@given(u=st.floats(1.0, 50.0))
def test_twenty_three_types(u):
    types = sufficient_list(u)
    assert len(types) == 23
    assert all(len(t) <= 6 for t in types)
    keys = {(t.letters, t.classes, t.cusps) for t in types}
    assert len(keys) == 23
    for t in types:
        r = t.reversed()
        assert (r.letters, r.classes, r.cusps) in keys


def test_regime_guard():
    with pytest.raises(UnsupportedRegime):
        sufficient_list(0.99)


def test_form_round_trip():
    for form in BASE_FORMS:
        assert format_form(*parse_form(form)) == form
    assert AbstractPathType.from_form("CC_m|C_mC", 3).label == "CCμ|CμC"


def test_concrete_counts():
    counts = {t.form: len(expand_concrete(t)) for t in sufficient_list(3.0)}
    assert counts == CONCRETE_COUNTS
    assert len(concrete_candidates(3.0)) == TOTAL_CONCRETE


@pytest.mark.parametrize("form,expected", [
    ("C|C", {"L+|L-", "L-|L+", "R+|R-", "R-|R+"}),
    ("CC", {"L+R+", "L-R-", "R+L+", "R-L-"}),
    ("T", {"L0", "R0"}),
])
def test_expansion_examples(form, expected):
    t = AbstractPathType.from_form(form, 3.0)
    assert {c.label for c in expand_concrete(t)} == expected


def test_table_words_present():
    words = {c.word for c in concrete_candidates(3.0)}
    for w in ("L-R-R+", "L-L0L+", "L-R-R+L+", "R+L+L-R-", "R-R+G+L+"):
        assert w in words


def test_junction_invariants():
    for c in concrete_candidates(2.0):
        for i, (a, b) in enumerate(zip(c.kinds, c.kinds[1:])):
            cusp = c.abstract.cusps[i]
            # v and u_g never switch at the same junction
            assert not (a.v != b.v and a.turn != b.turn and a.family == b.family == "C")
            if "T" in (a.family, b.family):
                other = b if a.family == "T" else a
                assert other.family == "C" and other.turn == (a.turn if a.family == "T" else b.turn)
            if cusp:
                assert a.family == b.family == "C" and a.turn == b.turn and a.v == -b.v
            assert junction_ok(a, b, cusp)


def test_junction_ok_table():
    ok_pairs = [(k1, k2) for k1 in ALL_KINDS for k2 in ALL_KINDS if junction_ok(k1, k2, False)]
    # four of each: C-C inflections, C-G, G-C, C-T, T-C
    assert len(ok_pairs) == 20
    assert len([1 for k1 in ALL_KINDS for k2 in ALL_KINDS if junction_ok(k1, k2, True)]) == 4


def test_domains():
    u = 3.0
    b = beta(u)
    t = AbstractPathType.from_form("CC_p|C", u)
    d = angle_domain(t, 1)
    assert (d.lo, d.hi, d.lo_closed, d.hi_closed) == (0.0, b, False, True)
    assert d.contains(b) and not d.contains(b + 1e-6) and not d.contains(0.0)
    t = AbstractPathType.from_form("CC_m|C_mC", u)
    d1, d2 = angle_domain(t, 1), angle_domain(t, 2)
    assert d1 is d2
    assert not d1.contains(b) and d1.contains(b - 1e-6)
    t = AbstractPathType.from_form("C|C", u)
    d = angle_domain(t, 0)
    assert d.hi == math.pi and d.contains(math.pi)
    t = AbstractPathType.from_form("CGC", u)
    d = angle_domain(t, 1)
    assert d.hi == 2 * math.pi and not d.contains(2 * math.pi) and d.contains(4.0)
    t = AbstractPathType.from_form("C|C_bG", u)
    d = angle_domain(t, 1)
    assert d.lo == d.hi == b
    t = AbstractPathType.from_form("T", u)
    assert angle_domain(t, 0).hi == math.pi


def test_shared_groups():
    by_form = {t.form: t for t in sufficient_list(3.0)}
    c = expand_concrete(by_form["CC_m|C_mC_m|C_mC"])[0]
    assert c.shared_groups() == ((1, 2, 3, 4),)
    c = expand_concrete(by_form["C|C_pC_p|C"])[0]
    assert c.shared_groups() == ((1, 2),)
    assert c.classes == (FREE, PSI, PSI, FREE)
    c = expand_concrete(by_form["C|C_bGC_b|C"])[0]
    assert c.classes.count(BETA) == 2 and c.shared_groups() == ()
    assert by_form["CC_m|C_mC"].shared_class == MU
