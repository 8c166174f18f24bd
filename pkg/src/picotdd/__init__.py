"""System-level simulator for dynamic-TDD pico-cell networks with
closed-loop uplink power control on flexible subframes."""

from .channel import (CouplingMatrix, LinkType, PathlossModel, SlopeModel,
                      build_coupling_matrix, default_pathloss_model)
from .engine import RunMetrics, SimConfig, TraceRecorder, collect_metrics, run
from .frame import (Direction, SubframeClass, classify_subframe,
                    decode_config_id, encode_config_id, encode_flexible_bitmap,
                    subframe_direction)
from .mac import PfState, ReconfigPolicy, select_configuration
from .phy import LinkBudgetParams, SubframeSnapshot, capacity_bps
from .powerctl import PowerControlParams, delta_lookup, ul_transmit_power
from .topology import NetworkLayout, generate_layout
from .traffic import TrafficParams, generate_arrivals

__version__ = "0.1.0"

__all__ = [
    "CouplingMatrix", "Direction", "LinkBudgetParams", "LinkType",
    "NetworkLayout", "PathlossModel", "PfState", "PowerControlParams",
    "ReconfigPolicy", "RunMetrics", "SimConfig", "SlopeModel", "SubframeClass",
    "SubframeSnapshot", "TraceRecorder", "TrafficParams", "build_coupling_matrix",
    "capacity_bps", "classify_subframe", "collect_metrics", "decode_config_id",
    "default_pathloss_model", "delta_lookup", "encode_config_id",
    "encode_flexible_bitmap", "generate_arrivals", "generate_layout", "run",
    "select_configuration", "subframe_direction", "ul_transmit_power",
]
