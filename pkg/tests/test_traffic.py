from collections import deque

import numpy as np
import pytest

from picotdd import traffic
from picotdd.traffic import DL, UL, PacketRecord, TrafficParams


def test_lambda_coupling():
    p = TrafficParams(lambda_dl=1.5)
    assert p.lambda_ul == 0.75
    with pytest.raises(ValueError):
        TrafficParams(lambda_dl=-0.1)
    with pytest.raises(ValueError):
        TrafficParams(lambda_dl=1.0, packet_bits=0)


def test_zero_rate_gives_no_packets():
    out = traffic.generate_arrivals(TrafficParams(0.0), 0, [0, 1], 10_000, seed=1)
    assert out == []


def test_packet_sizes_and_quantization():
    out = traffic.generate_arrivals(TrafficParams(2.0), 0, [3, 4, 5], 20_000, seed=2)
    assert out
    for p in out:
        assert p.size_bits == 4_194_304
        assert p.remaining_bits == 4_194_304
        assert isinstance(p.arrival_time_ms, int)
        assert 0 < p.arrival_time_ms < 20_000
        assert p.ue in (3, 4, 5)
        assert p.direction in (DL, UL)
    arr = [p.arrival_time_ms for p in out]
    assert arr == sorted(arr)


def test_poisson_mean_against_analytic():
    # oracle: mean count of a Poisson process of rate 1/s over 10^6 ms is
    # 1000 with variance 1000; check the mean over 100 independent seeds
    # stays within 3 standard errors.
    counts = []
    for seed in range(100):
        out = traffic.generate_arrivals(TrafficParams(1.0), 0, [0], 1_000_000, seed)
        counts.append(sum(1 for p in out if p.direction == DL))
    se = np.sqrt(1000.0 / len(counts))
    assert abs(np.mean(counts) - 1000.0) <= 3.0 * se
    # UL runs at half the rate
    ul_counts = [sum(1 for p in traffic.generate_arrivals(
        TrafficParams(1.0), 0, [0], 1_000_000, seed) if p.direction == UL)
        for seed in range(30)]
    assert abs(np.mean(ul_counts) - 500.0) <= 3.0 * np.sqrt(500.0 / 30)


def test_arrivals_deterministic_per_seed():
    a = traffic.generate_arrivals(TrafficParams(1.0), 2, [0, 1], 50_000, seed=9)
    b = traffic.generate_arrivals(TrafficParams(1.0), 2, [0, 1], 50_000, seed=9)
    assert [(p.arrival_time_ms, p.ue, p.direction) for p in a] \
        == [(p.arrival_time_ms, p.ue, p.direction) for p in b]
    c = traffic.generate_arrivals(TrafficParams(1.0), 3, [0, 1], 50_000, seed=9)
    assert [(p.arrival_time_ms, p.direction) for p in a] \
        != [(p.arrival_time_ms, p.direction) for p in c]


def _packet(bits, arrival=0, pid=0):
    return PacketRecord(id=pid, direction=UL, ue=0, size_bits=bits,
                        arrival_time_ms=arrival, remaining_bits=float(bits))


def test_serve_exact_drain():
    q = deque([_packet(100)])
    res = traffic.serve(q, 100, now_ms=7)
    assert res.bits_served == 100
    assert len(res.completed) == 1
    assert res.completed[0].completion_time_ms == 7
    assert not q


def test_serve_zero_is_identity():
    q = deque([_packet(100)])
    res = traffic.serve(q, 0, now_ms=1)
    assert res.bits_served == 0
    assert res.completed == []
    assert q[0].remaining_bits == 100


def test_serve_fifo_spill():
    q = deque([_packet(100, pid=0), _packet(100, pid=1)])
    res = traffic.serve(q, 150, now_ms=4)
    assert res.bits_served == 150
    assert [p.id for p in res.completed] == [0]
    assert q[0].remaining_bits == 50


def test_serve_conservation_and_fifo_order():
    rng = np.random.default_rng(0)
    q = deque(_packet(int(rng.integers(1, 500)), pid=i) for i in range(20))
    total = sum(p.remaining_bits for p in q)
    done = []
    t = 0
    while q:
        t += 1
        res = traffic.serve(q, float(rng.integers(0, 200)), now_ms=t)
        done.extend(res.completed)
    assert sum(p.size_bits for p in done) == total
    assert [p.id for p in done] == sorted(p.id for p in done)
    times = [p.completion_time_ms for p in done]
    assert times == sorted(times)


def test_serve_rejects_negative():
    with pytest.raises(ValueError):
        traffic.serve(deque(), -1.0, 0)
