"""Synchronization accuracy table, drifting clocks and head-side translation.

The head is the time reference. A node's clock is linear in true time
(``ClockState``); the head recovers the node/head frequency ratio from two
consecutive beacon timestamp pairs and translates node timestamps with it.
"""

from __future__ import annotations

import csv
import math
import random
import statistics
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import DegenerateInterval, UnsatisfiableAccuracy
from .model import US_PER_S, seconds_to_us

PPM = Fraction(1, 1_000_000)


@dataclass(frozen=True)
class AccuracyRow:
    si: int  # microseconds
    mae: Fraction  # seconds
    mse: Fraction | None = None


@dataclass(frozen=True)
class AccuracyTable:
    rows: tuple[AccuracyRow, ...]

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise ValueError("accuracy table is empty")
        for a, b in zip(rows, rows[1:]):
            if b.si <= a.si:
                raise ValueError("SI values must be strictly increasing")
            if b.mae < a.mae:
                raise ValueError(
                    f"MAE must not decrease with SI ({a.mae} at {a.si} us, {b.mae} at {b.si} us)"
                )

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str | float, str | float]]) -> AccuracyTable:
        """Build from ``(si_seconds, mae_seconds)`` pairs given as decimal strings or floats."""
        rows = [AccuracyRow(seconds_to_us(si), _exact(mae)) for si, mae in pairs]
        return cls(tuple(sorted(rows, key=lambda r: r.si)))

    @property
    def best_mae(self) -> Fraction:
        return self.rows[0].mae


def _exact(value) -> Fraction:
    return Fraction(str(value)) if isinstance(value, float) else Fraction(value)


def monotone_envelope(rows: Sequence[AccuracyRow]) -> tuple[AccuracyRow, ...]:
    """Raise each MAE to the worst value seen at any shorter SI."""
    out = []
    worst = None
    for row in sorted(rows, key=lambda r: r.si):
        worst = row.mae if worst is None else max(worst, row.mae)
        out.append(AccuracyRow(row.si, worst, row.mse))
    return tuple(out)


# Practical evaluation (AHTS), the default.
AHTS_TABLE = AccuracyTable((
    AccuracyRow(1 * US_PER_S, Fraction("1.8166E-06"), Fraction("5.2094E-12")),
    AccuracyRow(10 * US_PER_S, Fraction("2.3385E-06"), Fraction("9.1694E-12")),
    AccuracyRow(100 * US_PER_S, Fraction("8.4225E-06"), Fraction("1.2524E-10")),
))

# Simulation results (EE-ASCFR). These MAEs shrink slightly as SI grows, so the
# shipped table is their monotone envelope.
EE_ASCFR_ROWS = (
    AccuracyRow(10_000, Fraction("1.0887E-24"), Fraction("4.7684E-19")),
    AccuracyRow(1 * US_PER_S, Fraction("9.1748E-25"), Fraction("5.4210E-19")),
    AccuracyRow(100 * US_PER_S, Fraction("8.8811E-25"), Fraction("5.8990E-19")),
)
EE_ASCFR_TABLE = AccuracyTable(monotone_envelope(EE_ASCFR_ROWS))

TABLES = {"ahts": AHTS_TABLE, "ee-ascfr": EE_ASCFR_TABLE}


def load_accuracy_csv(path: str | Path) -> AccuracyTable:
    """Read a ``si_seconds,mae_seconds[,mse_seconds]`` CSV file."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"si_seconds", "mae_seconds"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: header must contain si_seconds,mae_seconds")
        rows = []
        for rec in reader:
            mse = rec.get("mse_seconds") or None
            rows.append(AccuracyRow(
                seconds_to_us(rec["si_seconds"].strip()),
                Fraction(rec["mae_seconds"].strip()),
                Fraction(mse.strip()) if mse else None,
            ))
    return AccuracyTable(tuple(sorted(rows, key=lambda r: r.si)))


def accuracy_to_si(sa_min: Fraction | str | float, table: AccuracyTable = AHTS_TABLE) -> int:
    """Longest tabulated SI whose MAE still meets ``sa_min`` (step rule, no interpolation)."""
    sa_min = _exact(sa_min)
    if sa_min < table.best_mae:
        raise UnsatisfiableAccuracy(
            f"accuracy {float(sa_min):g} s is below the best tabulated MAE {float(table.best_mae):g} s"
        )
    return max(r.si for r in table.rows if r.mae <= sa_min)


@dataclass(frozen=True)
class ClockState:
    drift_ppm: Fraction = Fraction(0)
    offset: Fraction = Fraction(0)  # local reading at epoch, us
    epoch: int = 0  # true time, us

    def __post_init__(self) -> None:
        object.__setattr__(self, "drift_ppm", Fraction(self.drift_ppm))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if abs(self.drift_ppm) > 200:
            raise ValueError(f"|drift| {float(self.drift_ppm)} ppm exceeds 200 ppm")

    @property
    def rate(self) -> Fraction:
        return 1 + self.drift_ppm * PPM


def local_time(clock: ClockState, true_time) -> Fraction:
    if true_time < clock.epoch:
        raise ValueError("true_time precedes the clock epoch")
    return clock.offset + (Fraction(true_time) - clock.epoch) * clock.rate


def true_time_of(clock: ClockState, local) -> Fraction:
    """Inverse of :func:`local_time`."""
    return clock.epoch + (Fraction(local) - clock.offset) / clock.rate


def quantize(value, tick: int = 1) -> int:
    """Clock reading as seen through a counter of ``tick`` microseconds."""
    return math.floor(Fraction(value) / tick) * tick


@dataclass(frozen=True)
class SyncSample:
    """Timestamps piggybacked on one bundle.

    t1: head clock at beacon emission, t2: node clock at beacon reception,
    t3: node clock when the bundle went out.
    """

    t1: int
    t2: int
    t3: int
    node: int = 0

    def __post_init__(self) -> None:
        if self.t3 < self.t2:
            raise ValueError("t3 precedes t2")


@dataclass(frozen=True)
class SkewEstimate:
    ratio: Fraction
    anchor_node: Fraction
    anchor_head: Fraction
    samples: int = 1

    def __post_init__(self) -> None:
        if self.ratio <= 0:
            raise ValueError("ratio must be positive")

    @property
    def offset(self) -> Fraction:
        return self.anchor_node - self.anchor_head

    @property
    def valid_from(self) -> Fraction:
        return self.anchor_head

    @property
    def converged(self) -> bool:
        return self.samples >= 2


def update_skew(
    prev: SkewEstimate | None, s: SyncSample, s_prev: SyncSample | None = None
) -> SkewEstimate:
    """Two-point frequency-ratio estimate anchored at the newest beacon pair.

    ``t1``/``t2`` of the same beacon are simultaneous up to the MAC-layer
    timestamping, so they are the pair the ratio is taken over.
    """
    if s_prev is None:
        ratio = prev.ratio if prev is not None else Fraction(1)
        count = prev.samples + 1 if prev is not None else 1
    else:
        if s_prev.node != s.node:
            raise ValueError(f"samples from nodes {s_prev.node} and {s.node}")
        if s.t1 == s_prev.t1:
            raise DegenerateInterval(f"both samples carry beacon t1={s.t1}")
        ratio = Fraction(s.t2 - s_prev.t2, s.t1 - s_prev.t1)
        count = max(prev.samples if prev else 1, 1) + 1
    return SkewEstimate(ratio, Fraction(s.t2), Fraction(s.t1), count)


def translate_timestamp(est: SkewEstimate, node_ts) -> Fraction:
    return est.anchor_head + (Fraction(node_ts) - est.anchor_node) / est.ratio


def sync_error(est: SkewEstimate, clock: ClockState, true_time) -> Fraction:
    return abs(translate_timestamp(est, local_time(clock, true_time)) - true_time)


class WanderingClock:
    """Clock whose frequency error performs a random walk.

    Frequency steps every ``step`` microseconds by N(0, wander_ppm**2 * step_s).
    With ``wander_ppm == 0`` it is the linear ``ClockState`` clock. Floats are
    used here; the sync sweep evaluates hundreds of thousands of readings.
    """

    def __init__(self, drift_ppm: float, offset: float, wander_ppm: float,
                 rng: random.Random, step: int = US_PER_S):
        self.step = step
        self.drift_ppm = float(drift_ppm)
        self.offset = float(offset)
        self.wander = wander_ppm * math.sqrt(step / US_PER_S)
        self._rng = rng
        self._freq = [self.drift_ppm]
        self._base = [self.offset]

    def _extend(self, k: int) -> None:
        while len(self._freq) <= k:
            f = self._freq[-1]
            self._base.append(self._base[-1] + self.step * (1 + f * 1e-6))
            self._freq.append(f + self._rng.gauss(0.0, self.wander) if self.wander else f)

    def local(self, t: float) -> float:
        k = int(t // self.step)
        self._extend(k)
        return self._base[k] + (t - k * self.step) * (1 + self._freq[k] * 1e-6)


# frequency random walk for the SI sweep; a purely linear clock makes longer
# intervals look as good as short ones
STUDY_WANDER_PPM = 0.02
# not a divisor of any SI, so evaluation points cover every phase of the interval
STUDY_EVAL_STEP = 1_013_117


def sync_error_trial(
    si: int,
    drift_ppm: float,
    seed: int,
    duration: int = 3600 * US_PER_S,
    tick: int = 1,
    wander_ppm: float = 0.0,
    eval_step: int = STUDY_EVAL_STEP,
) -> list[float]:
    """Translation errors (us) of a converged head-side estimate for one node.

    Sync samples arrive every ``si``; at every ``eval_step`` the latest
    estimate translates the node's quantized reading and is compared with
    true time.
    """
    rng = random.Random(seed)
    clock = WanderingClock(drift_ppm, rng.uniform(0, US_PER_S), wander_ppm, rng)
    phase = rng.randrange(0, si)
    read = lambda t: math.floor(clock.local(t) / tick) * tick  # noqa: E731

    errors: list[float] = []
    est: SkewEstimate | None = None
    prev: SyncSample | None = None
    next_sync = phase
    t = 0
    while t < duration:
        while next_sync <= t:
            sample = SyncSample(next_sync, read(next_sync), read(next_sync))
            est = update_skew(est, sample, prev)
            prev = sample
            next_sync += si
        if est is not None and est.converged:
            ratio = float(est.ratio)
            translated = float(est.anchor_head) + (read(t) - float(est.anchor_node)) / ratio
            errors.append(abs(translated - t))
        t += eval_step
    return errors


def median_sync_error(si: int, drifts: Sequence[float], seeds: Sequence[int], **kw) -> float:
    errs: list[float] = []
    for drift, seed in zip(drifts, seeds):
        errs.extend(sync_error_trial(si, drift, seed, **kw))
    return statistics.median(errs)
