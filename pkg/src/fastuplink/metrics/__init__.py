from .aoi import average_aoi, peak_aoi, update_aoi
from .regret import cost, missed_allocations, regret_slot, system_usage, wrong_allocations
from .trace import SERIES_COLUMNS, MetricsTrace, SlotRecord

__all__ = [
    "MetricsTrace",
    "SERIES_COLUMNS",
    "SlotRecord",
    "average_aoi",
    "cost",
    "missed_allocations",
    "peak_aoi",
    "regret_slot",
    "system_usage",
    "update_aoi",
    "wrong_allocations",
]
