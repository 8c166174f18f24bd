"""Trace the closed-loop power control pipeline on a three-cell scene.

One victim pico with two neighbors: select the strong-interferer set by
pathloss threshold, receive their configurations over the 3-bit wire,
compute the per-flexible-subframe interference indicator, and turn it
into a power boost for the victim's uplink users.
"""

import numpy as np

from picotdd import channel, frame, powerctl, topology
from picotdd.frame import SubframeClass
from picotdd.powerctl import PowerControlParams

# victim pico 0 with a near neighbor (60 m) and a far one (300 m)
layout = topology.NetworkLayout(
    site_xy=np.zeros((1, 2)),
    pico_xy=np.array([[0.0, 0.0], [60.0, 0.0], [300.0, 0.0]]),
    ue_xy=np.array([[20.0, 10.0]]),
    serving=np.array([0]))
coupling = channel.build_coupling_matrix(layout, channel.default_pathloss_model())
params = PowerControlParams()

print("pico-pico pathloss from the victim:",
      [f"{coupling.pathloss_db[0, k]:.1f} dB" for k in (1, 2)])

interferers = powerctl.select_interferers(0, coupling, params)
print(f"strong-interferer set of pico 0 (threshold {params.p_threshold_db} dB):",
      interferers.tolist())

configs = [0, 2, 5]   # victim uses 0; neighbor 1 uses 2; neighbor 2 uses 5
state = powerctl.exchange_configs(configs, [interferers, [], []])
print("received bitmaps:", state[0])

enb_power_dbm = 24.0
ind = powerctl.period_indicator_state(0, interferers, state, coupling,
                                      enb_power_dbm, params)
print(f"indicator maximum I_max = {ind.i_max:.2f}")
for s in frame.FLEXIBLE_SUBFRAMES:
    i_s = ind.i_by_subframe[s]
    print(f"  subframe {s}: I = {i_s:6.2f}  ->  boost {ind.delta_db[s]:.0f} dB")

serving_pl = coupling.pathloss_db[layout.ue_node(0), 0]
print(f"\nserving pathloss of the UE: {serving_pl:.1f} dB")
open_loop = powerctl.ul_transmit_power(serving_pl, SubframeClass.FIXED, 0.0, params)
print(f"fixed-subframe power (open loop): {open_loop:.2f} dBm")
for s in (3, 4):
    p = powerctl.ul_transmit_power(serving_pl, SubframeClass.FLEXIBLE,
                                   ind.delta_db[s], params)
    print(f"flexible subframe {s} power: {p:.2f} dBm")
