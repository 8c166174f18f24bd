"""Closed-loop UL power control for flexible subframes.

Each pico picks the neighbor eNBs whose pathloss stays under a threshold
as its potential aggressors, learns their TDD configurations through the
3-bit wire codec once per reconfiguration period, and scores each
flexible subframe with an interference-level indicator. The indicator
region (relative to its all-aggressors-active maximum) selects a power
boost that the cell's UEs add on top of open-loop power in that subframe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import frame
from .channel import CouplingMatrix, db_to_lin
from .frame import SubframeClass

DELTA_TABLE_DEFAULT = ((1.0 / 3.0, 0.0), (1.0 / 2.0, 1.0), (2.0 / 3.0, 3.0), (1.0, 5.0))


@dataclass(frozen=True)
class PowerControlParams:
    p0_dbm: float = -76.0
    alpha: float = 0.8                      # fractional pathloss compensation
    p_threshold_db: float = 130.0           # aggressor-set pathloss bound
    ue_pmax_dbm: float = 23.0
    delta_table: tuple = DELTA_TABLE_DEFAULT  # (fraction of I_max, boost dB)
    noise_dbm_per_hz: float = -174.0
    indicator_bandwidth_hz: float = 10e6    # system bandwidth normalizing I
    include_antenna_gains: bool = False     # fold eNB gains into the indicator

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        fractions = [f for f, _ in self.delta_table]
        deltas = [d for _, d in self.delta_table]
        if not fractions or fractions[-1] != 1.0:
            raise ValueError("delta_table must end at fraction 1.0")
        if any(b <= a for a, b in zip(fractions, fractions[1:])):
            raise ValueError("delta_table fractions must be strictly increasing")
        if any(b < a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("delta_table boosts must be non-decreasing")

    @property
    def indicator_noise_mw(self) -> float:
        return float(db_to_lin(self.noise_dbm_per_hz
                               + 10.0 * math.log10(self.indicator_bandwidth_hz)))


@dataclass
class IndicatorState:
    """Per-victim indicator results for one reconfiguration period."""

    i_by_subframe: dict          # flexible subframe -> I
    i_max: float
    delta_db: dict               # flexible subframe -> boost dB


def select_interferers(victim: int, coupling: CouplingMatrix,
                       params: PowerControlParams) -> np.ndarray:
    """Neighbor picos whose pathloss to `victim` is within the threshold."""
    pl = coupling.pathloss_db[victim, :coupling.n_picos]
    members = np.flatnonzero(pl <= params.p_threshold_db)
    return members[members != victim]


def all_interferer_sets(coupling: CouplingMatrix,
                        params: PowerControlParams) -> list:
    return [select_interferers(v, coupling, params)
            for v in range(coupling.n_picos)]


def exchange_configs(configs, interferer_sets) -> list:
    """Deliver each aggressor's configuration to its victims.

    Only the 3-bit configuration id travels on the (ideal) wire; the
    receiver expands it back to the 5-bit flexible bitmap.
    """
    state = []
    for members in interferer_sets:
        received = {}
        for k in members:
            wire = frame.encode_config_id(int(configs[int(k)]))
            received[int(k)] = frame.decode_config_id(wire)
        state.append(received)
    return state


def _aggressor_sum_mw(victim, members_and_weights, coupling, enb_power_dbm, params):
    total = 0.0
    for k, active in members_and_weights:
        if not active:
            continue
        pl = coupling.pathloss_db[victim, k]
        gain_db = -pl
        if params.include_antenna_gains:
            gain_db += 2.0 * coupling.enb_gain_dbi
        total += float(db_to_lin(enb_power_dbm + gain_db))
    return total


def interference_indicator(victim: int, subframe: int, config_state,
                           coupling: CouplingMatrix, enb_power_dbm: float,
                           params: PowerControlParams) -> float:
    """Interference-level indicator for one flexible subframe.

    log2 of the aggregate aggressor power weighted by pathloss, taken
    relative to thermal noise over the system bandwidth. Aggressors count
    only when their bitmap marks the subframe as downlink. -inf when no
    aggressor is active.
    """
    if frame.classify_subframe(subframe) is not SubframeClass.FLEXIBLE:
        raise ValueError(f"subframe {subframe} is not flexible")
    pos = frame.FLEXIBLE_BIT_POSITION[subframe]
    received = config_state[victim]
    total = _aggressor_sum_mw(
        victim,
        ((k, bitmap[pos] == "1") for k, bitmap in received.items()),
        coupling, enb_power_dbm, params)
    if total <= 0.0:
        return -math.inf
    return math.log2(total / params.indicator_noise_mw)


def indicator_max(victim: int, interferers, coupling: CouplingMatrix,
                  enb_power_dbm: float, params: PowerControlParams) -> float:
    """Indicator value with every aggressor forced active."""
    total = _aggressor_sum_mw(victim, ((int(k), True) for k in interferers),
                              coupling, enb_power_dbm, params)
    if total <= 0.0:
        return -math.inf
    return math.log2(total / params.indicator_noise_mw)


def delta_lookup(i_value: float, i_max: float, delta_table=DELTA_TABLE_DEFAULT) -> float:
    """Boost for an indicator value, right-closed regions of I_max fractions.

    No aggressors (or an aggregate maximum at or below noise) means no
    boost; indicator values below noise clamp to the bottom region.
    """
    if math.isinf(i_value) and i_value < 0:
        return 0.0
    if math.isinf(i_max) or i_max <= 0.0:
        return 0.0
    if i_value > i_max + 1e-9:
        raise ValueError("indicator exceeds its configured maximum")
    i_value = min(max(i_value, 0.0), i_max)
    for fraction, delta in delta_table:
        if i_value <= fraction * i_max:
            return delta
    return delta_table[-1][1]


def period_indicator_state(victim: int, interferers, config_state,
                           coupling: CouplingMatrix, enb_power_dbm: float,
                           params: PowerControlParams) -> IndicatorState:
    """Indicator and boost for every flexible subframe of one period."""
    i_max = indicator_max(victim, interferers, coupling, enb_power_dbm, params)
    i_by_subframe = {}
    delta_db = {}
    for s in frame.FLEXIBLE_SUBFRAMES:
        i_s = interference_indicator(victim, s, config_state, coupling,
                                     enb_power_dbm, params)
        i_by_subframe[s] = i_s
        delta_db[s] = delta_lookup(i_s, i_max, params.delta_table)
    return IndicatorState(i_by_subframe=i_by_subframe, i_max=i_max, delta_db=delta_db)


def ul_transmit_power(serving_pl_db: float, subframe_class: SubframeClass,
                      delta_db: float, params: PowerControlParams) -> float:
    """UE transmit power in dBm: open loop plus boost, capped at maximum.

    Fixed subframes never carry a boost; the cap applies after the boost.
    """
    if subframe_class is SubframeClass.FIXED and delta_db != 0.0:
        raise ValueError("fixed subframes carry no power boost")
    return min(params.ue_pmax_dbm,
               params.p0_dbm + params.alpha * serving_pl_db + delta_db)
