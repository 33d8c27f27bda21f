from fractions import Fraction

import pytest

from wsnbundle.errors import IncompletePlan
from wsnbundle.head import (
    MonitorStatus, PathTable, disseminate, monitor, reoptimize, update_paths, violation_rate,
)
from wsnbundle.messages import BundledMessage, MeasurementRecord
from wsnbundle.model import BundlingPlan, DelaySample
from wsnbundle.simulator import HeadRuntime
from wsnbundle.sync import AHTS_TABLE, SyncSample

from .helpers import REF_EDGES, S, req


def msg(sender, parent, t1=0, t2=0, t3=0, entries=None):
    entries = entries or (MeasurementRecord(sender, 0, t3),)
    return BundledMessage(sender, parent, SyncSample(t1, t2, t3, sender), entries)


def learned(edges=REF_EDGES):
    table = PathTable()
    for c, p in edges:
        table, _ = update_paths(table, msg(c, p))
    return table


def test_paths_from_messages():
    table, flags = PathTable(), []
    for c, p in REF_EDGES:
        table, changed = update_paths(table, msg(c, p))
        flags.append(changed)
    assert dict(table.snapshot.parent) == dict(REF_EDGES)
    assert flags == [True, True, True, True]
    assert update_paths(table, msg(4, 2)) == (table, False)
    moved, changed = update_paths(table, msg(4, 3))
    assert changed and moved.revision == table.revision + 1
    assert moved.snapshot.path(4) == (4, 3, 1)


def test_out_of_order_reports_are_pending():
    table, changed = update_paths(PathTable(), msg(4, 2))
    assert table.pending and table.snapshot is None and not changed
    table, changed = update_paths(table, msg(2, 1))
    assert table.pending and not changed
    table, changed = update_paths(table, msg(1, 0))
    assert not table.pending and changed


def test_transient_cycle_held():
    table = learned()
    bad, changed = update_paths(table, msg(1, 4))
    assert bad.pending and not changed
    assert bad.snapshot == table.snapshot


def _s(e2e, t_meas=0, origin=4):
    return DelaySample(0, origin, e2e, t_meas)


def test_monitor():
    st = MonitorStatus().with_requirement(0, 8 * S)
    st = monitor(st, _s(7_750_000))
    assert st.violations == 0 and st.nodes[4].max_delay == 7_750_000
    st = monitor(st, _s(8_300_000))
    assert st.violations == 1 and st.samples == 2
    assert violation_rate(st) == Fraction(1, 2)


def test_monitor_not_retroactive():
    st = MonitorStatus().with_requirement(100 * S, 2 * S)
    st = monitor(st, _s(5 * S, t_meas=99 * S))
    assert st.samples == 0
    assert st.bound_at(99 * S) is None and st.bound_at(100 * S) == 2 * S


def test_reoptimize():
    table = learned()
    assert reoptimize(table, req(8), AHTS_TABLE) == BundlingPlan({1: 15, 2: 6, 3: 4, 4: 1})
    assert reoptimize(table, req(2, chi_max=10)) == BundlingPlan({1: 2, 2: 1, 3: 1, 4: 1})
    assert reoptimize(table, req(8)) == reoptimize(table, req(8))


def test_disseminate():
    table = learned()
    ups = {u.node: u for u in disseminate(BundlingPlan({1: 15, 2: 6, 3: 4, 4: 1}), table, 0, S)}
    assert ups[4].apply_at == 3 * S and ups[1].apply_at == S and ups[4].gamma == 1
    single = learned([(1, 0)])
    assert disseminate(BundlingPlan({1: 3}), single, 10, S)[0].apply_at == 10 + S
    with pytest.raises(IncompletePlan):
        disseminate(BundlingPlan({1: 1, 2: 1, 4: 1}), table)


def test_runtime_bootstrap_and_translation():
    h = HeadRuntime(AHTS_TABLE, S)
    h.set_requirement(0, req(8))
    # first contact only anchors the estimate
    first = msg(1, 0, t1=0, t2=5000, t3=5000, entries=(MeasurementRecord(1, 0, 5000),))
    samples, ups = h.receive(10_000, first)
    assert samples == [] and len(ups) == 1 and ups[0].gamma == 8
    second = msg(1, 0, t1=S, t2=S + 5000, t3=S + 5000, entries=(MeasurementRecord(1, 1, S + 4000),))
    samples, ups = h.receive(S + 10_000, second)
    assert [s.e2e for s in samples] == [11_000] and ups == []


def test_runtime_holds_plan_when_infeasible():
    h = HeadRuntime(AHTS_TABLE, S)
    for c, p in REF_EDGES:
        h.receive(0, msg(c, p))
    h.set_requirement(0, req(8))
    plan = h.plan
    assert h.set_requirement(10, req("0.5")) == []
    assert h.plan == plan and "holding previous plan" in h.notes[-1][1]
