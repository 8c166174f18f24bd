"""Per-cell MAC: periodic TDD configuration selection from queue state,
and per-subframe user scheduling (proportional fair across users, FIFO
within a user's queue)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .traffic import DL, UL

# Downlink share of each configuration used by the selection rule
# (special subframes counted as downlink).
DL_FRACTIONS_DEFAULT = (0.4, 0.6, 0.8, 0.7, 0.8, 0.9, 0.7)


@dataclass(frozen=True)
class ReconfigPolicy:
    period_ms: int = 10
    dl_fractions: tuple = DL_FRACTIONS_DEFAULT

    def __post_init__(self):
        if self.period_ms < 1:
            raise ValueError("period_ms must be >= 1")
        if len(self.dl_fractions) != 7:
            raise ValueError("need one DL fraction per configuration")


def select_configuration(dl_queued_bits: float, ul_queued_bits: float,
                         current_config: int, policy: ReconfigPolicy) -> int:
    """Pick the configuration whose DL share best matches the queue mix.

    Empty queues keep the current configuration; ties go to the lowest
    configuration id.
    """
    if dl_queued_bits < 0 or ul_queued_bits < 0:
        raise ValueError("queued bits must be >= 0")
    total = dl_queued_bits + ul_queued_bits
    if total == 0:
        return current_config
    rho = dl_queued_bits / total
    best, best_dist = 0, abs(rho - policy.dl_fractions[0])
    for config_id in range(1, 7):
        dist = abs(rho - policy.dl_fractions[config_id])
        if dist < best_dist:
            best, best_dist = config_id, dist
    return best


@dataclass
class PfState:
    """Exponentially averaged served rates, one row per UE, columns DL/UL."""

    r_avg_bps: np.ndarray        # (n_ues, 2)
    window: int = 100            # averaging horizon in subframes
    epsilon_bps: float = 1.0     # floor protecting the fairness ratio

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")


def make_pf_state(n_ues: int, window: int = 100, epsilon_bps: float = 1.0) -> PfState:
    return PfState(np.zeros((n_ues, 2)), window=window, epsilon_bps=epsilon_bps)


def schedule(backlogged, achievable_bps, r_avg_bps, epsilon_bps: float = 1.0):
    """Proportional-fair pick among backlogged users.

    Returns the local index maximizing achievable rate over average
    served rate, or None when nothing is backlogged. Ties resolve to the
    lowest index.
    """
    backlogged = np.asarray(backlogged, dtype=bool)
    if not backlogged.any():
        return None
    score = np.where(
        backlogged,
        np.asarray(achievable_bps, dtype=float)
        / np.maximum(np.asarray(r_avg_bps, dtype=float), epsilon_bps),
        -1.0,
    )
    return int(np.argmax(score))


def update_pf(pf_state: PfState, ue_indices, direction: int, backlogged,
              served_ue: int, served_bps: float) -> None:
    """Fold one subframe's outcome into the averages.

    The served UE blends in its rate; every other backlogged UE of the
    same direction decays. UEs outside `ue_indices` are untouched.
    """
    decay = 1.0 - 1.0 / pf_state.window
    ue_indices = np.asarray(ue_indices, dtype=int)
    mask = np.asarray(backlogged, dtype=bool)
    rows = ue_indices[mask]
    pf_state.r_avg_bps[rows, direction] *= decay
    pf_state.r_avg_bps[served_ue, direction] += served_bps / pf_state.window
