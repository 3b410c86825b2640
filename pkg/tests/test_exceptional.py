import pytest
from hypothesis import given, strategies as st

from liexp.arith import is_prime
from liexp.bounds import RuleContext, exponent_interval, replay_interval
from liexp.exceptional import (
    GROUPS, ROWS, OutOfScope, crosscheck_table, covers_all_odd_primes, exceptional_row,
    exceptional_table,
)
from liexp.facts import DEFAULT_FACTS
from liexp.spaces import GroupAtom, Sphere, parse_space


def test_g2_at_3_is_cited():
    r = exceptional_row("G2", 3)
    assert (r.interval.lower, r.interval.upper) == (6, 6)
    assert str(r.factor) == "B2(3,11)" and r.mode == "cited-fact"


def test_e8_at_7():
    r = exceptional_row("E8", 7)
    assert (r.interval.lower, r.interval.upper) == (29, 32)
    assert str(r.factor) == "B(23,35,47,59)"


def test_f4_at_11_derived():
    r = exceptional_row("F4", 11)
    assert (r.interval.lower, r.interval.upper) == (12, 12)
    assert str(r.factor) == "B(3,23)" and r.mode == "derived"


@pytest.mark.parametrize("g, p", [("E7", 3), ("E8", 3)])
def test_torsion_pairs_rejected(g, p):
    with pytest.raises(OutOfScope):
        exceptional_row(g, p)


def test_table_skips_torsion_pairs():
    rows = exceptional_table([3])
    assert {r.group for r in rows} == {"G2", "F4", "E6"}


def test_coalesce_g2_large_primes():
    rows = exceptional_table([7, 11, 13], groups=("G2",))
    assert len(rows) == 1
    r = rows[0]
    assert r.prime_label() == ">5" and r.factor_label() == "S^11"
    assert r.primes == (7, 11, 13)


def test_coalesce_e6_5_7():
    rows = exceptional_table([5, 7], groups=("E6",))
    assert len(rows) == 1 and rows[0].factor_label() == "B(23-q,23)"
    assert rows[0].factor_label(symbolic=False) == "B(15,23)"


@pytest.mark.parametrize("g", GROUPS)
def test_prime_conditions_partition(g):
    assert covers_all_odd_primes(g)


@given(st.sampled_from(GROUPS), st.integers(3, 400).filter(lambda n: n % 2 and is_prime(n)))
def test_rows_consistent_with_engine(g, p):
    if (g, p) in {("E7", 3), ("E8", 3)}:
        return
    row = exceptional_row(g, p)
    spec = next(s for s in ROWS if s.group == g and s.cond.contains(p))
    target = GroupAtom("SU", spec.via_su) if spec.via_su else row.factor
    e = exponent_interval(target, RuleContext(p))
    assert (row.interval.lower, row.interval.upper) == (e.lower, e.upper)
    g_iv = exponent_interval(GroupAtom(g), p)
    assert (g_iv.lower, g_iv.upper) == (e.lower, e.upper)
    replay_interval(row.interval)


@given(st.sampled_from(GROUPS), st.integers(30, 2000).filter(is_prime))
def test_large_primes_are_sphere_points(g, p):
    row = exceptional_row(g, p)
    assert isinstance(row.factor, Sphere)
    assert row.interval.lower == row.interval.upper == (row.factor.dim - 1) // 2


def test_crosscheck_default_and_strict():
    for strict in (False, True):
        report = crosscheck_table(strict=strict)
        assert report.ok
        assert sum(c.status == "stored" for c in report.lines) == 5
        e8 = next(c for c in report.lines if (c.group, c.p) == ("E8", 7))
        assert e8.got == (29, 32)


def test_crosscheck_tampered_fact():
    facts = DEFAULT_FACTS.with_fact("B(23,35,47,59)", 7, lower=28)
    report = crosscheck_table(facts=facts)
    assert not report.ok
    assert [(c.group, c.p) for c in report.mismatches] == [("E8", 7)]


def test_crosscheck_tampered_cited_cell():
    facts = DEFAULT_FACTS.with_fact("K3", 3, upper=13)
    report = crosscheck_table(facts=facts)
    assert {(c.group, c.p) for c in report.mismatches} == {("F4", 3), ("E6", 3)}
