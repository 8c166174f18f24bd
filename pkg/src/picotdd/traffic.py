"""FTP-style traffic: Poisson file arrivals per cell and direction,
FIFO byte queues per user.

Direction constants double as array indices throughout the simulator.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

DL, UL = 0, 1
DIRECTION_NAMES = ("dl", "ul")

PACKET_BITS_DEFAULT = 4_194_304  # 0.5 MB (2**19 bytes)

# Substream domains hashed into per-purpose seeds; layout owns (seed, 0).
_STREAM_ARRIVALS = 1
_STREAM_UE_PICK = 2


@dataclass(frozen=True)
class TrafficParams:
    """Per-cell arrival rates in packets/s. The UL rate is tied to half
    the DL rate at construction."""

    lambda_dl: float
    packet_bits: int = PACKET_BITS_DEFAULT

    def __post_init__(self):
        if self.lambda_dl < 0:
            raise ValueError("lambda_dl must be >= 0")
        if self.packet_bits <= 0:
            raise ValueError("packet_bits must be positive")

    @property
    def lambda_ul(self) -> float:
        return self.lambda_dl / 2.0


@dataclass
class PacketRecord:
    """One file transfer; the unit of the throughput metrics."""

    id: int
    direction: int               # DL or UL
    ue: int                      # global UE index
    size_bits: int
    arrival_time_ms: int
    remaining_bits: float
    completion_time_ms: int | None = None


@dataclass
class ServeResult:
    bits_served: float
    completed: list


def generate_arrivals(params: TrafficParams, cell_index: int, ue_ids,
                      duration_ms: int, seed: int) -> list[PacketRecord]:
    """Draw both directions' Poisson arrival processes for one cell.

    Arrival instants are quantized up to the next 1 ms subframe boundary.
    Each packet goes to a uniformly random UE of the cell. The streams
    depend only on (seed, cell_index, direction), never on scheme or on
    other cells.
    """
    if duration_ms <= 0:
        raise ValueError("duration_ms must be positive")
    ue_ids = np.asarray(ue_ids, dtype=int)
    records = []
    for direction, rate in ((DL, params.lambda_dl), (UL, params.lambda_ul)):
        if rate <= 0.0:
            continue
        rng_t = np.random.default_rng(
            np.random.SeedSequence((seed, _STREAM_ARRIVALS, cell_index, direction)))
        rng_u = np.random.default_rng(
            np.random.SeedSequence((seed, _STREAM_UE_PICK, cell_index, direction)))
        mean_gap_ms = 1000.0 / rate
        t = 0.0
        seq = 0
        while True:
            t += rng_t.exponential(mean_gap_ms)
            arrival_ms = int(np.ceil(t))
            if arrival_ms >= duration_ms:
                break
            ue = int(ue_ids[rng_u.integers(len(ue_ids))])
            records.append(PacketRecord(
                id=seq,
                direction=direction,
                ue=ue,
                size_bits=params.packet_bits,
                arrival_time_ms=arrival_ms,
                remaining_bits=float(params.packet_bits),
            ))
            seq += 1
    records.sort(key=lambda p: (p.arrival_time_ms, p.direction, p.id))
    return records


def serve(queue: deque, bits: float, now_ms: int) -> ServeResult:
    """Drain up to `bits` from the head of a FIFO queue.

    Packets whose remaining bits reach zero are removed, stamped with
    `now_ms` as completion time, and returned. Leftover capacity spills
    into the next packet.
    """
    if bits < 0:
        raise ValueError("bits must be >= 0")
    served = 0.0
    completed = []
    while queue and bits > 0.0:
        head = queue[0]
        take = min(bits, head.remaining_bits)
        head.remaining_bits -= take
        served += take
        bits -= take
        if head.remaining_bits <= 0.0:
            head.remaining_bits = 0.0
            head.completion_time_ms = now_ms
            completed.append(queue.popleft())
    return ServeResult(bits_served=served, completed=completed)
