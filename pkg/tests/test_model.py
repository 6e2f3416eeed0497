import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from storage_sharing.model import (
    CommunityDay,
    HouseholdDay,
    aggregate,
    community_from_dict,
    community_to_dict,
)
from support import oracle_aggregate, random_community, rel_close


def test_two_household_sum():
    c = CommunityDay(None, (HouseholdDay("a", 3, 2, 5), HouseholdDay("b", 7, 1, 1)))
    v = aggregate(c, ["a", "b"])
    assert (v.X_S, v.Y_S, v.B_S) == (10, 3, 6)


def test_singleton_is_identity():
    h = HouseholdDay("7", 4.25, 1.5, 9.0, 0.08)
    v = aggregate(CommunityDay(None, (h,)), {"7"})
    assert (v.X_S, v.Y_S, v.B_S, v.capital_S) == (h.X, h.Y, h.B, h.lambda_b * h.B)


def test_eighty_households_match_independent_summation():
    c = random_community(random.Random(80), 80)
    v = aggregate(c, c.ids)
    for got, want in zip((v.X_S, v.Y_S, v.B_S, v.capital_S), oracle_aggregate(c.households)):
        assert rel_close(got, want)


def test_summation_order_does_not_depend_on_input_order():
    c = random_community(random.Random(3), 30)
    shuffled = list(c.households)
    random.Random(4).shuffle(shuffled)
    c2 = CommunityDay(None, tuple(shuffled))
    assert aggregate(c, c.ids) == aggregate(c2, reversed(c2.ids))


def test_errors():
    c = CommunityDay(None, (HouseholdDay("a", 1, 1, 1),))
    with pytest.raises(KeyError, match="zz"):
        aggregate(c, ["a", "zz"])
    with pytest.raises(ValueError, match="empty"):
        aggregate(c, [])
    with pytest.raises(ValueError, match="duplicate"):
        CommunityDay(None, (HouseholdDay("a", 1, 1, 1), HouseholdDay("a", 2, 2, 2)))
    with pytest.raises(ValueError, match="no households"):
        CommunityDay(None, ())
    with pytest.raises(ValueError, match="X"):
        HouseholdDay("a", -1, 0, 0)
    with pytest.raises(ValueError, match="B"):
        HouseholdDay("a", 1, 0, float("nan"))


def test_numeric_ids_sort_numerically():
    c = CommunityDay(None, tuple(HouseholdDay(i, 1, 1, 1) for i in ["10", "9", "x", "100"]))
    assert c.ids == ("9", "10", "100", "x")


@st.composite
def community_and_split(draw):
    n = draw(st.integers(2, 12))
    qty = st.floats(0, 1e3, allow_nan=False)
    hh = tuple(HouseholdDay(str(k), draw(qty), draw(qty), draw(qty), draw(st.floats(0, 1))) for k in range(n))
    labels = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return CommunityDay(None, hh), labels


@given(community_and_split())
def test_disjoint_union_is_componentwise_sum(data):
    c, labels = data
    S = [h.id for h, l in zip(c.households, labels) if l == 1]
    T = [h.id for h, l in zip(c.households, labels) if l == 2]
    if not S or not T:
        return
    vs, vt, vu = aggregate(c, S), aggregate(c, T), aggregate(c, S + T)
    for a, b, u in [(vs.X_S, vt.X_S, vu.X_S), (vs.Y_S, vt.Y_S, vu.Y_S), (vs.B_S, vt.B_S, vu.B_S),
                    (vs.capital_S, vt.capital_S, vu.capital_S)]:
        assert rel_close(u, a + b)
        # monotone: adding members never decreases an aggregate
        assert u >= a and u >= b


def test_community_json_roundtrip():
    c = random_community(random.Random(5), 6)
    assert community_from_dict(community_to_dict(c)) == c
