from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsnbundle.delay import (
    DelayMode, ServiceDelayParams, bundling_delay, e2e_delay_model, link_delay,
    service_delay_full, service_delay_simplified,
)
from wsnbundle.errors import IncompletePlan, UnknownNode
from wsnbundle.model import BundlingPlan, validate_topology

from .helpers import MS, S

P = ServiceDelayParams.from_ms(1, 4, 4, 1, 2, 5, n_max=5)
PLAN = BundlingPlan({1: 15, 2: 6, 3: 4, 4: 1})


@pytest.mark.parametrize("n_try, ms", [(1, 10), (3, 32), (7, 55), (5, 54)])
def test_service_full(n_try, ms):
    assert service_delay_full(P, n_try) == ms * MS


@pytest.mark.parametrize("args, ms", [((1, 4, 4, 1), 10), ((0, 0, 0, 0), 0), ((2, 3, 4, 1), 10)])
def test_service_simplified(args, ms):
    assert service_delay_simplified(ServiceDelayParams.from_ms(*args)) == ms * MS


def test_default_service_is_10ms():
    assert service_delay_simplified(ServiceDelayParams()) == 10 * MS


@pytest.mark.parametrize("g, lam, expect", [(5, 0, 5 * S), (15, 3, Fraction(15, 4) * S), (1, 0, S)])
def test_bundling_delay(g, lam, expect):
    assert bundling_delay(g, lam, S) == expect


def test_bundling_delay_exact_rational():
    assert bundling_delay(1, 2, 1) == Fraction(1, 3)


def test_link_delay():
    assert link_delay(0, 10 * MS, 5 * S, "exact").total == 5_010_000
    approx = link_delay(0, 10 * MS, 5 * S, DelayMode.APPROXIMATE)
    assert approx.total == 5 * S and approx.d_serv == 10 * MS
    assert link_delay(0, 0, 0).total == 0


def test_e2e_reference(ref_topo):
    assert e2e_delay_model(4, PLAN, ref_topo, S) == Fraction(775, 100) * S
    assert e2e_delay_model(1, PLAN, ref_topo, S) == Fraction(375, 100) * S
    assert e2e_delay_model(4, PLAN, ref_topo, S, "exact") == Fraction(775, 100) * S + 3 * 10 * MS


@given(st.integers(1, 15))
def test_e2e_single_node(chi):
    t = validate_topology([(1, 0)])
    assert e2e_delay_model(1, BundlingPlan({1: chi}), t, S) == chi * S


def test_e2e_errors(ref_topo):
    with pytest.raises(UnknownNode):
        e2e_delay_model(7, PLAN, ref_topo, S)
    with pytest.raises(IncompletePlan):
        e2e_delay_model(4, BundlingPlan({4: 1, 1: 2}), ref_topo, S)


durations = st.integers(0, 20 * MS)


@given(durations, durations, durations, durations, durations, durations, st.integers(1, 8))
def test_full_equals_simplified_at_first_try(a, b, c, d, e, f, n):
    p = ServiceDelayParams(a, b, c, d, e, f, n)
    assert service_delay_full(p, 1) == service_delay_simplified(p)


@given(st.integers(1, 50), st.integers(0, 20), st.integers(1, 10**7))
def test_bundling_linear(g, lam, i):
    assert bundling_delay(2 * g, lam, i) == 2 * bundling_delay(g, lam, i)
    assert bundling_delay(g, lam, 2 * i) == 2 * bundling_delay(g, lam, i)
    if (1 + lam) % 2 == 0:
        assert bundling_delay(g, (1 + lam) // 2 - 1, i) == 2 * bundling_delay(g, lam, i)


plans = st.fixed_dictionaries({n: st.integers(1, 15) for n in (1, 2, 3, 4)})


@given(plans, st.sampled_from([1, 2, 3, 4]), st.sampled_from([1, 2, 3, 4]))
def test_e2e_monotone_and_exact_gap(gammas, node, bump):
    topo = validate_topology(((1, 0), (2, 1), (3, 1), (4, 2)))
    plan = BundlingPlan(gammas)
    bigger = BundlingPlan({**gammas, bump: gammas[bump] + 1})
    assert e2e_delay_model(node, bigger, topo, S) >= e2e_delay_model(node, plan, topo, S)
    gap = e2e_delay_model(node, plan, topo, S, "exact") - e2e_delay_model(node, plan, topo, S)
    assert gap == topo.depth(node) * service_delay_simplified(ServiceDelayParams())
