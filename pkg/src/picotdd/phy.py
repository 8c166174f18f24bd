"""Per-subframe SINR for uplink and downlink victims, and Shannon
capacity with a spectral-efficiency cap.

Every cell grants the whole band to at most one transmitter per
subframe, so each active cell contributes exactly one signal and one
interference source. All four interference types fall out of the node
kinds: eNB-to-eNB and UE-to-UE appear whenever neighbor cells run
opposite directions in the same subframe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import CouplingMatrix, db_to_lin
from .traffic import DL, UL


@dataclass(frozen=True)
class LinkBudgetParams:
    noise_dbm_per_hz: float = -174.0
    bandwidth_hz: float = 9e6            # occupied bandwidth of the 10 MHz channel
    se_cap_bps_per_hz: float = 4.8
    include_ul_cochannel: bool = True    # UE->eNB interference from other cells

    def __post_init__(self):
        if self.bandwidth_hz <= 0 or self.se_cap_bps_per_hz <= 0:
            raise ValueError("bandwidth and spectral-efficiency cap must be positive")

    @property
    def noise_dbm(self) -> float:
        return self.noise_dbm_per_hz + 10.0 * math.log10(self.bandwidth_hz)

    @property
    def noise_mw(self) -> float:
        return float(db_to_lin(self.noise_dbm))


@dataclass(frozen=True)
class CellTransmission:
    """One cell's grant for one subframe."""

    direction: int           # DL or UL
    tx_node: int
    rx_node: int
    tx_power_dbm: float


@dataclass
class SubframeSnapshot:
    """All transmissions of one subframe; None entries are idle cells."""

    subframe: int
    entries: list = field(default_factory=list)  # per cell: CellTransmission | None


def _interference_mw(victim_cell: int, rx_node: int, victim_dir: int,
                     snapshot: SubframeSnapshot, coupling: CouplingMatrix,
                     params: LinkBudgetParams) -> float:
    total = 0.0
    for cell, entry in enumerate(snapshot.entries):
        if cell == victim_cell or entry is None:
            continue
        if (victim_dir == UL and entry.direction == UL
                and not params.include_ul_cochannel):
            continue
        total += float(db_to_lin(entry.tx_power_dbm)
                       * db_to_lin(coupling.gain_db[entry.tx_node, rx_node]))
    return total


def _sinr_db(signal_mw: float, interference_mw: float, noise_mw: float) -> float:
    if signal_mw <= 0.0:
        return -math.inf
    return 10.0 * math.log10(signal_mw / (interference_mw + noise_mw))


def ul_sinr_db(victim_cell: int, snapshot: SubframeSnapshot,
               coupling: CouplingMatrix, params: LinkBudgetParams) -> float:
    """SINR at the victim eNB for its scheduled uplink UE."""
    entry = snapshot.entries[victim_cell]
    if entry is None or entry.direction != UL:
        raise ValueError(f"cell {victim_cell} has no scheduled UL transmission")
    signal = float(db_to_lin(entry.tx_power_dbm)
                   * db_to_lin(coupling.gain_db[entry.tx_node, entry.rx_node]))
    interference = _interference_mw(victim_cell, entry.rx_node, UL,
                                    snapshot, coupling, params)
    return _sinr_db(signal, interference, params.noise_mw)


def dl_sinr_db(victim_ue: int, snapshot: SubframeSnapshot,
               coupling: CouplingMatrix, params: LinkBudgetParams) -> float:
    """SINR at a UE scheduled as downlink receiver this subframe."""
    for cell, entry in enumerate(snapshot.entries):
        if entry is not None and entry.direction == DL and entry.rx_node == victim_ue:
            signal = float(db_to_lin(entry.tx_power_dbm)
                           * db_to_lin(coupling.gain_db[entry.tx_node, victim_ue]))
            interference = _interference_mw(cell, victim_ue, DL,
                                            snapshot, coupling, params)
            return _sinr_db(signal, interference, params.noise_mw)
    raise ValueError(f"UE {victim_ue} is not a scheduled DL receiver")


def snapshot_sinr_db(snapshot: SubframeSnapshot, coupling: CouplingMatrix,
                     params: LinkBudgetParams) -> np.ndarray:
    """SINR of every active cell's transmission, NaN for idle cells.

    Vectorized equivalent of ul_sinr_db / dl_sinr_db; this is the path
    the engine runs every subframe.
    """
    n_cells = len(snapshot.entries)
    out = np.full(n_cells, np.nan)
    active = [(c, e) for c, e in enumerate(snapshot.entries) if e is not None]
    if not active:
        return out
    cells = np.array([c for c, _ in active])
    tx = np.array([e.tx_node for _, e in active])
    rx = np.array([e.rx_node for _, e in active])
    dirs = np.array([e.direction for _, e in active])
    p_lin = np.array([float(db_to_lin(e.tx_power_dbm)) for _, e in active])

    recv = p_lin[:, None] * coupling.gain_lin[np.ix_(tx, rx)]  # tx i -> victim j
    own = np.diagonal(recv).copy()
    cross = recv.sum(axis=0) - own
    if not params.include_ul_cochannel:
        ul_pair = (dirs[:, None] == UL) & (dirs[None, :] == UL)
        np.fill_diagonal(ul_pair, False)
        cross = cross - (recv * ul_pair).sum(axis=0)

    with np.errstate(divide="ignore"):
        sinr = 10.0 * np.log10(own / (cross + params.noise_mw))
    out[cells] = sinr
    return out


def capacity_bps(sinr_db, params: LinkBudgetParams):
    """Shannon capacity over the occupied bandwidth, spectral efficiency
    capped; zero for unusable (-inf) SINR."""
    sinr_lin = db_to_lin(np.asarray(sinr_db, dtype=float))
    se = np.minimum(np.log2(1.0 + sinr_lin), params.se_cap_bps_per_hz)
    cap = params.bandwidth_hz * se
    return cap if cap.ndim else float(cap)
