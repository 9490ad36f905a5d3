"""Per-run metric records."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd

from .aoi import average_aoi, peak_aoi, update_aoi
from .regret import missed_allocations, regret_slot, wrong_allocations

SERIES_COLUMNS = [
    "t",
    "regret_slot",
    "regret_cum",
    "omega",
    "mu",
    "usage",
    "aoi_mean",
    "aoi_peak",
]


@dataclass
class SlotRecord:
    """Metrics of one slot, ages taken after the slot's transmissions."""

    t: int
    omega: int
    mu: int
    regret: int
    regret_cum: int
    usage: float
    ages: np.ndarray
    grants: np.ndarray

    @property
    def aoi_mean(self) -> float:
        return average_aoi(self.ages)

    @property
    def aoi_peak(self) -> int:
        return peak_aoi(self.ages)


@dataclass
class MetricsTrace:
    """Slot-by-slot metrics of one policy on one trajectory."""

    n_devices: int
    n_slots: int
    records: List[SlotRecord] = field(default_factory=list)
    ages: np.ndarray = field(init=False)
    used: int = field(default=0, init=False)

    def __post_init__(self) -> None:
        self.ages = np.zeros(self.n_devices, dtype=np.int64)

    def record(
        self,
        grants: np.ndarray,
        truth: np.ndarray,
        resources: Optional[int] = None,
    ) -> SlotRecord:
        """
        Score one slot and advance the ages.

        Pass resources for policies whose grant vector marks only successful
        transmissions, so unused resources are charged as wrong allocations.
        """
        omega = wrong_allocations(grants, truth, resources)
        mu = missed_allocations(grants, truth)
        regret = regret_slot(omega, mu)
        self.ages = update_aoi(self.ages, grants, truth)

        t = len(self.records) + 1
        self.used += self.n_slots - omega
        usage = self.used / (t * self.n_slots)
        record = SlotRecord(
            t=t,
            omega=omega,
            mu=mu,
            regret=regret,
            regret_cum=self.cumulative_regret + regret,
            usage=usage,
            ages=self.ages.copy(),
            grants=np.asarray(grants, dtype=np.int8).copy(),
        )
        self.records.append(record)
        return record

    def __len__(self) -> int:
        return len(self.records)

    @property
    def omegas(self) -> List[int]:
        return [r.omega for r in self.records]

    @property
    def cumulative_regret(self) -> int:
        return self.records[-1].regret_cum if self.records else 0

    @property
    def regret_series(self) -> np.ndarray:
        return np.array([r.regret_cum for r in self.records], dtype=np.int64)

    @property
    def grant_matrix(self) -> np.ndarray:
        """Grant vector of every slot, shape (T, K)."""
        return np.array([r.grants for r in self.records], dtype=np.int8)

    @property
    def aoi_series(self) -> np.ndarray:
        return np.array([r.aoi_mean for r in self.records])

    @property
    def final_usage(self) -> float:
        return self.records[-1].usage if self.records else 0.0

    @property
    def average_regret(self) -> float:
        """Mean regret per slot."""
        return self.cumulative_regret / len(self.records) if self.records else 0.0

    @property
    def mean_aoi(self) -> float:
        """Age averaged over devices and slots."""
        return float(self.aoi_series.mean()) if self.records else 0.0

    def to_frame(self) -> pd.DataFrame:
        """One row per slot with the series columns."""
        rows = [
            {
                "t": r.t,
                "regret_slot": r.regret,
                "regret_cum": r.regret_cum,
                "omega": r.omega,
                "mu": r.mu,
                "usage": r.usage,
                "aoi_mean": r.aoi_mean,
                "aoi_peak": r.aoi_peak,
            }
            for r in self.records
        ]
        return pd.DataFrame(rows, columns=SERIES_COLUMNS)
