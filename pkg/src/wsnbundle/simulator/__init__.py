from .calc import EnergyReport, WindowCount, delay_calculator, energy_tally, mean_window_total, message_counts
from .config import BundlingMode, ScenarioConfig
from .engine import run
from .head_agent import HeadRuntime
from .trace import TraceSet

__all__ = [
    "BundlingMode", "EnergyReport", "HeadRuntime", "ScenarioConfig", "TraceSet", "WindowCount",
    "delay_calculator", "energy_tally", "mean_window_total", "message_counts", "run",
]

from .analysis import Segment, pre_requirement_max, segments, summary  # noqa: E402

__all__ += ["Segment", "pre_requirement_max", "segments", "summary"]
