from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from liexp.arith import nu_factorial
from liexp.bounds import (
    ReplayError, RuleContext, exponent_interval, fibration_upper, iterated_bundle_upper, replay,
    replay_interval, sp_interval, sphere_exponent, su_lower, su_upper_closed, su_upper_recursive,
    two_cell_bundle_interval,
)
from liexp.certs import INF
from liexp.spaces import Bundle, GroupAtom, PrimeMismatch, parse_space
from liexp.splittings import decompose

PRIMES = [3, 5, 7, 11, 13]


def iv(text, p, strict=False):
    return exponent_interval(parse_space(text), RuleContext(p, strict=strict))


@pytest.mark.parametrize("p, dim, v", [(5, 11, 5), (3, 3, 1), (31, 59, 29)])
def test_sphere_exponent(p, dim, v):
    b = sphere_exponent(p, dim)
    assert (b.lower, b.upper) == (v, v)


def test_sphere_even_rejected():
    with pytest.raises(ValueError):
        sphere_exponent(5, 10)


@pytest.mark.parametrize("p, dims, lo, hi", [
    (5, (3, 11), 6, 6), (7, (11, 23), 11, 12), (11, (15, 35), 17, 18),
])
def test_two_cell(p, dims, lo, hi):
    b = two_cell_bundle_interval(p, Bundle(dims))
    assert (b.lower, b.upper) == (lo, hi)


@pytest.mark.parametrize("dims", [(3, 19), (3, 11, 19)])
def test_two_cell_rejects(dims):
    with pytest.raises(ValueError):
        two_cell_bundle_interval(5, Bundle(dims))


@pytest.mark.parametrize("r, n, f, v", [(2, 23, 18, 25), (3, 29, 25, 32), (0, 9, 4, 9)])
def test_fibration_upper(r, n, f, v):
    assert fibration_upper(r, n, f) == v


@pytest.mark.parametrize("p, n, v", [(5, 6, 6), (3, 12, 18), (7, 18, 19)])
def test_su_upper_closed(p, n, v):
    assert su_upper_closed(p, n) == v


def test_closed_overlap_takes_min():
    # overlap p^2+1 <= n < p^2+p: at p=3 that is n = 10, 11
    for n in (10, 11):
        a = n - 1 + nu_factorial(3, n - 1)
        b = n + 3 - 3 + max(0, ((n - 2) // 2 - 1) * ((n - 2) // 2 - 1 - 1) // 2)
        assert su_upper_closed(3, n) == min(a, b)


# f over the two residue classes of SU(12) at p = 3, worked by hand:
#   even tops 2,4,...,12:  1, 1+max(1,3)=4, 1+max(4,5)=6, 2+max(6,7)=9, 4+max(9,9)=13, 4+max(13,11)=17
#   odd tops 3,5,...,11:   2, 1+max(2,4)=5, 2+max(5,6)=8, 2+max(8,8)=10, 4+max(10,10)=14
HAND_F_3 = {2: 1, 4: 4, 6: 6, 8: 9, 10: 13, 12: 17, 3: 2, 5: 5, 7: 8, 9: 10, 11: 14}


def test_recursive_hand_unrolled():
    assert su_upper_recursive(3, 12) == max(HAND_F_3.values()) == 17
    for m, v in HAND_F_3.items():
        assert su_upper_recursive(3, m) == max(HAND_F_3[k] for k in HAND_F_3 if k <= m)


def test_recursive_examples():
    assert su_upper_recursive(5, 6) == 6
    for p in PRIMES:
        for n in range(2, p + 1):
            assert su_upper_recursive(p, n) == n - 1


@pytest.mark.parametrize("p, n, v", [(5, 6, 6), (3, 9, 9), (7, 18, 17)])
def test_su_lower(p, n, v):
    assert su_lower(p, n) == v


@pytest.mark.parametrize("p", PRIMES)
def test_recursive_equals_closed_small_n(p):
    for n in range(2, p * p + p):
        assert su_upper_recursive(p, n) == su_upper_closed(p, n)


@given(st.sampled_from([3, 5, 7]), st.integers(2, 500))
def test_recursive_below_closed(p, n):
    assert su_lower(p, n) <= su_upper_recursive(p, n) <= su_upper_closed(p, n)


@given(st.sampled_from(PRIMES), st.integers(2, 400))
def test_recursive_monotone(p, n):
    assert su_upper_recursive(p, n) <= su_upper_recursive(p, n + 1)


def test_iterated_verbatim():
    for strict in (False, True):
        ctx = RuleContext(7, strict=strict)
        a = iterated_bundle_upper(ctx, (23, 35, 47))
        b = iterated_bundle_upper(ctx, (23, 35, 47, 59))
        assert (a.value, b.value) == (25, 32)
        assert a.extrapolated_count == b.extrapolated_count == 0
        replay(b)


def test_iterated_extrapolated_and_strict():
    c = iterated_bundle_upper(RuleContext(5), (3, 11, 19, 27, 35))
    assert c.value == 21 and c.extrapolated_count == 3
    assert iterated_bundle_upper(RuleContext(5, strict=True), (3, 11, 19, 27, 35)) is None
    # span 5q > (p-1)q fails the alpha_1 guard
    assert iterated_bundle_upper(RuleContext(5), (3, 11, 19, 27, 35, 43)) is None


def test_iterated_two_cell_defers():
    c = iterated_bundle_upper(RuleContext(7, strict=True), (11, 23))
    assert c.value == 12 and c.rule == "two_cell_upper"


@pytest.mark.parametrize("p, n, lo, hi", [(5, 4, 7, 8), (3, 3, 6, 6), (5, 1, 1, 1)])
def test_sp_interval(p, n, lo, hi):
    b = sp_interval(p, n)
    assert (b.lower, b.upper) == (lo, hi)


@pytest.mark.parametrize("text, p, lo, hi", [
    ("SU(18)", 5, 18, 20),
    ("SU(18)", 7, 17, 19),
    ("G2", 13, 5, 5),
    ("Spin(9)", 5, 7, 8),
    ("SU(1)", 3, 0, 0),
    ("B(23,35,47)", 7, 0, 25),
    ("K3", 3, 12, 12),
    ("S^3 x S^23", 7, 11, 11),
])
def test_exponent_interval(text, p, lo, hi):
    b = iv(text, p)
    assert (b.lower, b.upper) == (lo, hi)
    replay_interval(b)


def test_no_rule_gives_unbounded():
    b = iv("K5", 5)
    assert (b.lower, b.upper) == (0, INF)
    assert b.lower_cert is None and b.upper_cert is None


def test_prime_mismatch_raises():
    with pytest.raises(PrimeMismatch):
        iv("B(3,11)", 7)


def test_torsion_pair_raises():
    from liexp.exceptional import OutOfScope
    with pytest.raises(OutOfScope):
        iv("E8", 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_harris_consistency(p):
    for n in range(1, 21):
        a, b, c = iv(f"Spin({2 * n + 2})", p), iv(f"Spin({2 * n + 1})", p), iv(f"Sp({n})", p)
        assert (a.lower, a.upper) == (b.lower, b.upper) == (c.lower, c.upper)


@settings(max_examples=60)
@given(st.sampled_from(PRIMES), st.sampled_from(["SU", "Spin"]), st.integers(3, 40))
def test_decomposition_invariance(p, series, n):
    g = GroupAtom(series, n)
    ctx = RuleContext(p)
    a, b = exponent_interval(g, ctx), exponent_interval(decompose(g, p), ctx)
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_tie_prefers_fewer_extrapolated_nodes():
    # B(3,11,19) at p=5: the SU'(10) tower and the extrapolated fold both give 10
    b = iv("B(3,11,19)", 5)
    assert b.upper == 10
    assert b.upper_cert.extrapolated_count == 0


def test_replay_detects_tampering():
    b = iv("SU(18)", 5)
    bad = replace(b.upper_cert, value=19)
    with pytest.raises(ReplayError):
        replay(bad)
    from liexp.bounds import _su_tower_cert
    tower = _su_tower_cert(5, 18)
    assert tower.rule == "fibration"
    coker, fiber = tower.premises
    bad_leaf = replace(tower, premises=(replace(coker, value=coker.value - 1), fiber))
    with pytest.raises(ReplayError):
        replay(bad_leaf)


def test_replay_detects_rule_misuse():
    from liexp.certs import make_cert
    with pytest.raises(ReplayError):
        replay(make_cert("su_lower_dy", "DY", "x", 7, p=5, n=7, t=1))
    with pytest.raises(ReplayError):
        replay(make_cert("su_closed_a", "Th1", "x", 40, p=3, n=12))
    with pytest.raises(ReplayError):
        replay(make_cert("no_such_rule", "derived", "x", 0))
