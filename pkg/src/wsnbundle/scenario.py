"""Scenario files: versioned JSON, decimal seconds outside, integer microseconds inside.

Top-level keys::

    version               1 (required)
    topology              [[child, parent], ...] (required)
    duration_s            run length (required)
    requirement_schedule  [{at_s, d_e2e_max_s, sa_min_s, chi_min, chi_max}, ...]
    i_meas_s              measurement interval, default 1
    bundling_mode         all_data | self_data | none
    energy                {e_meas, e_sync, e_fwd, e_bundle}
    service               {d_spi_ms, d_mac_ms, d_frame_ms, d_ack_ms, d_wait_ack_ms, t_retry_ms, n_max}
    drifts_ppm            {"<node>": ppm, ...}
    seed                  integer
    initial_plan          uniform starting bundling number
    accuracy_table        ahts | ee-ascfr
    tick_us, d_prop_s, window_s
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .delay import ServiceDelayParams
from .errors import ConfigError
from .model import EnergyParams, RequirementSet, seconds_to_us
from .simulator.config import BundlingMode, ScenarioConfig
from .sync import TABLES

VERSION = 1

_TOP = {
    "version", "topology", "duration_s", "requirement_schedule", "i_meas_s", "bundling_mode",
    "energy", "service", "drifts_ppm", "seed", "initial_plan", "accuracy_table", "tick_us",
    "d_prop_s", "window_s",
}
# config-level field names that differ from their scenario-file key
_FIELD_KEYS = {"duration": "duration_s", "i_meas": "i_meas_s", "chi_max": "requirement_schedule",
               "initial_plan": "initial_plan", "tick": "tick_us", "d_prop": "d_prop_s",
               "window": "window_s"}
_REQ = {"at_s", "d_e2e_max_s", "sa_min_s", "chi_min", "chi_max"}
_ENERGY = {"e_meas", "e_sync", "e_fwd", "e_bundle"}
_SERVICE = {"d_spi_ms", "d_mac_ms", "d_frame_ms", "d_ack_ms", "d_wait_ack_ms", "t_retry_ms", "n_max"}


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, msg: str, field: str, key: str | None = None) -> ConfigError:
        return ConfigError(msg, field, _line_of(self.text, key or field.split(".")[-1].split("[")[0]))

    def keys(self, obj: Any, allowed: set[str], where: str) -> dict:
        if not isinstance(obj, dict):
            raise self.fail("expected an object", where)
        for k in obj:
            if k not in allowed:
                raise self.fail(f"unknown key {k!r}", f"{where}.{k}" if where else k, k)
        return obj

    def number(self, value: Any, field: str) -> Fraction:
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise self.fail("expected a number", field)
        return Fraction(value)

    def integer(self, value: Any, field: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.fail("expected an integer", field)
        return value

    def seconds(self, value: Any, field: str) -> int:
        return seconds_to_us(self.number(value, field))


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse scenario JSON; every rejection is a :class:`ConfigError` naming a field."""
    try:
        raw = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, None, exc.lineno) from exc
    r = _Reader(text)
    r.keys(raw, _TOP, "")
    for key in ("version", "topology", "duration_s"):
        if key not in raw:
            raise ConfigError("missing required key", key)
    if raw["version"] != VERSION:
        raise r.fail(f"unsupported version {raw['version']!r}, expected {VERSION}", "version")

    topo = raw["topology"]
    if not isinstance(topo, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in e)
        for e in topo
    ):
        raise r.fail("expected a list of [child, parent] integer pairs", "topology")
    edges = tuple((c, p) for c, p in topo)

    i_meas = r.seconds(raw.get("i_meas_s", 1), "i_meas_s")
    schedule = []
    for k, item in enumerate(raw.get("requirement_schedule", [])):
        where = f"requirement_schedule[{k}]"
        r.keys(item, _REQ, where)
        missing = _REQ - {"chi_min"} - set(item)
        if missing:
            raise r.fail(f"missing {sorted(missing)}", where, "requirement_schedule")
        try:
            req = RequirementSet(
                r.seconds(item["d_e2e_max_s"], f"{where}.d_e2e_max_s"),
                r.number(item["sa_min_s"], f"{where}.sa_min_s"),
                r.integer(item.get("chi_min", 1), f"{where}.chi_min"),
                r.integer(item["chi_max"], f"{where}.chi_max"),
                i_meas,
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise r.fail(str(exc), where, "requirement_schedule") from exc
        schedule.append((r.seconds(item["at_s"], f"{where}.at_s"), req))

    try:
        mode = BundlingMode(raw.get("bundling_mode", BundlingMode.ALL_DATA.value))
    except ValueError as exc:
        raise r.fail(f"unknown mode {raw['bundling_mode']!r}", "bundling_mode") from exc

    energy_raw = r.keys(raw.get("energy", {}), _ENERGY, "energy")
    try:
        energy = EnergyParams(**{k: r.integer(v, f"energy.{k}") for k, v in energy_raw.items()})
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise r.fail(str(exc), "energy") from exc

    svc_raw = r.keys(raw.get("service", {}), _SERVICE, "service")
    defaults = ServiceDelayParams()
    try:
        service = ServiceDelayParams.from_ms(
            *(r.number(svc_raw.get(f"{n}_ms", Fraction(getattr(defaults, n), 1000)), f"service.{n}_ms")
              for n in ("d_spi", "d_mac", "d_frame", "d_ack", "d_wait_ack", "t_retry")),
            n_max=r.integer(svc_raw.get("n_max", defaults.n_max), "service.n_max"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise r.fail(str(exc), "service") from exc

    drifts_raw = raw.get("drifts_ppm", {})
    if not isinstance(drifts_raw, dict):
        raise r.fail("expected an object", "drifts_ppm")
    drifts = {}
    for k, v in drifts_raw.items():
        try:
            node = int(k)
        except ValueError as exc:
            raise r.fail(f"node key {k!r} is not an integer", "drifts_ppm") from exc
        drifts[node] = r.number(v, f"drifts_ppm.{k}")

    table_name = raw.get("accuracy_table", "ahts")
    if table_name not in TABLES:
        raise r.fail(f"unknown table {table_name!r}, expected one of {sorted(TABLES)}", "accuracy_table")

    initial = raw.get("initial_plan")
    kwargs: dict[str, Any] = {}
    if "tick_us" in raw:
        kwargs["tick"] = r.integer(raw["tick_us"], "tick_us")
    if "d_prop_s" in raw:
        kwargs["d_prop"] = r.seconds(raw["d_prop_s"], "d_prop_s")
    if "window_s" in raw:
        kwargs["window"] = r.seconds(raw["window_s"], "window_s")
    try:
        return ScenarioConfig(
            edges=edges,
            schedule=tuple(schedule),
            duration=r.seconds(raw["duration_s"], "duration_s"),
            i_meas=i_meas,
            bundling_mode=mode,
            energy=energy,
            service=service,
            drifts_ppm=drifts,
            seed=r.integer(raw.get("seed", 0), "seed"),
            initial_plan=None if initial is None else r.integer(initial, "initial_plan"),
            table=TABLES[table_name],
            **kwargs,
        )
    except ConfigError as exc:
        if exc.line is not None or not exc.field:
            raise
        msg = str(exc).split(": ", 1)[-1]
        raise ConfigError(msg, exc.field, _line_of(text, _FIELD_KEYS.get(exc.field, exc.field))) from exc


def load_scenario(path: str | Path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_scenario(text)
