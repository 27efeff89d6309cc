"""Motion-to-photon latency: processing times, network delay, uplink queue."""

import pytest

from xredge.actions import ExecutionConfig, ExecutionMode, ImuRate, QualityLevel, decode_action
from xredge.latency import (
    FrameSizeModel,
    ProcTimeTable,
    UplinkQueue,
    mtp_local,
    net_delay,
    proc_time,
    violation,
)

TABLE = ProcTimeTable()
FRAME = FrameSizeModel()

LOCAL_FULL = decode_action(4)     # HIGH imu, HIGH quality, LOCAL
LOCAL_MIN = decode_action(12)     # LOW imu, LOW quality, LOCAL
OFFLOAD_FULL = decode_action(5)   # HIGH imu, HIGH quality, OFFLOAD


# ---------------------------------------------------------------------------
# processing time and local MTP
# ---------------------------------------------------------------------------


def test_proc_time_local():
    # t0 * phi * rho, by hand
    assert proc_time(LOCAL_FULL, TABLE) == pytest.approx(29.0)            # 29*1*1
    assert proc_time(LOCAL_MIN, TABLE) == pytest.approx(5.075)            # 29*0.25*0.7
    med = ExecutionConfig(QualityLevel.MEDIUM, ImuRate.MEDIUM, ExecutionMode.LOCAL)
    assert proc_time(med, TABLE) == pytest.approx(13.865625)              # 29*0.5625*0.85


def test_proc_time_offload_is_encode_only():
    assert proc_time(OFFLOAD_FULL, TABLE) == pytest.approx(10.0)
    low = ExecutionConfig(QualityLevel.LOW, ImuRate.HIGH, ExecutionMode.OFFLOAD)
    assert proc_time(low, TABLE) == pytest.approx(2.5)                    # 10*0.25


def test_mtp_local():
    assert mtp_local(LOCAL_FULL, TABLE) == pytest.approx(30.0)            # 29 + 1 overhead
    assert mtp_local(LOCAL_MIN, TABLE) == pytest.approx(6.075)
    with pytest.raises(ValueError):
        mtp_local(OFFLOAD_FULL, TABLE)


# ---------------------------------------------------------------------------
# network delay
# ---------------------------------------------------------------------------


def test_payload_scales_with_pixels():
    assert FRAME.payload_mbit(QualityLevel.HIGH) == pytest.approx(5.8)
    assert FRAME.payload_mbit(QualityLevel.MEDIUM) == pytest.approx(3.2625)
    assert FRAME.payload_mbit(QualityLevel.LOW) == pytest.approx(1.45)


def test_net_delay_hand_values():
    # serialization = payload / bandwidth, then add the RTT
    assert net_delay(QualityLevel.HIGH, 58.0, 10.0, FRAME) == pytest.approx(110.0)
    assert net_delay(QualityLevel.MEDIUM, 217.5, 5.0, FRAME) == pytest.approx(20.0)
    assert net_delay(QualityLevel.LOW, 10.0, 5.0, FRAME) == pytest.approx(150.0)


def test_net_delay_requires_positive_bandwidth():
    with pytest.raises(ValueError):
        net_delay(QualityLevel.HIGH, 0.0, 5.0, FRAME)


def test_violation():
    assert violation(30.0, 30.0) == 0.0
    assert violation(20.0, 30.0) == 0.0
    assert violation(45.0, 30.0) == pytest.approx(0.5)
    assert violation(60.0, 30.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        violation(10.0, 0.0)


# ---------------------------------------------------------------------------
# uplink queue
# ---------------------------------------------------------------------------


def test_single_frame_delivery_mtp():
    q = UplinkQueue(max_depth=20)
    q.enqueue(0.0, QualityLevel.HIGH, 5.8)
    out = q.drain(1000.0, 5.0, 1.0, 0.0, TABLE)
    assert len(out) == 1
    f = out[0]
    # 5.8 Mbit at 1000 Mbps = 5.8 ms of serialization
    assert f.t_deliver == pytest.approx(0.0058)
    # age + rtt + server inference + decode + encode = 5.8 + 5 + 8 + 1 + 10
    assert f.mtp_ms == pytest.approx(29.8)
    assert q.depth == 0 and q.delivered == 1


def test_partial_transmission_carries_over():
    q = UplinkQueue()
    q.enqueue(0.0, QualityLevel.HIGH, 5.8)
    assert q.drain(1.0, 5.0, 1.0, 0.0, TABLE) == []     # 1 Mbit of 5.8 sent
    assert q.depth == 1
    assert q.backlog_mbit == pytest.approx(4.8)
    # second half-window at 5.8 Mbps finishes at exactly t=1.0 + 4.8/5.8 s
    out = q.drain(5.8, 5.0, 1.0, 1.0, TABLE)
    assert len(out) == 1
    assert out[0].t_deliver == pytest.approx(1.0 + 4.8 / 5.8)


def test_stale_backlog_produces_high_mtp():
    # frames stuck through congestion come out with multi-second MTP
    q = UplinkQueue()
    q.enqueue(0.0, QualityLevel.HIGH, 5.8)
    q.drain(0.001, 5.0, 1.0, 0.0, TABLE)                # effectively stalled
    out = q.drain(1000.0, 5.0, 1.0, 3.0, TABLE)
    assert len(out) == 1
    assert out[0].mtp_ms > 3000.0


def test_drop_oldest_when_full():
    q = UplinkQueue(max_depth=3)
    drops = 0
    for i in range(5):
        drops += q.enqueue(float(i), QualityLevel.LOW, 1.45)
    assert drops == 2
    assert q.depth == 3
    assert [f.t_capture for f in q.frames] == [2.0, 3.0, 4.0]
    assert q.dropped == 2


def test_flush_counts_as_drops():
    q = UplinkQueue()
    for i in range(4):
        q.enqueue(float(i), QualityLevel.LOW, 1.45)
    assert q.flush() == 4
    assert q.depth == 0
    assert q.dropped == 4


def test_frame_conservation():
    # enqueued == delivered + dropped + still queued, whatever the traffic
    q = UplinkQueue(max_depth=5)
    for i in range(12):
        q.enqueue(i * 0.05, QualityLevel.MEDIUM, 3.2625)
        if i % 3 == 0:
            q.drain(50.0, 5.0, 0.05, i * 0.05, TABLE)
    q.flush()
    assert q.enqueued == 12
    assert q.enqueued == q.delivered + q.dropped + q.depth


def test_fifo_order():
    q = UplinkQueue()
    for i in range(3):
        q.enqueue(float(i), QualityLevel.LOW, 1.45)
    out = q.drain(1000.0, 5.0, 1.0, 3.0, TABLE)
    assert [f.t_capture for f in out] == [0.0, 1.0, 2.0]
    assert out[0].mtp_ms > out[-1].mtp_ms              # oldest is stalest


def test_queue_validation():
    with pytest.raises(ValueError):
        UplinkQueue(max_depth=0)
    q = UplinkQueue()
    with pytest.raises(ValueError):
        q.enqueue(0.0, QualityLevel.LOW, 0.0)
    with pytest.raises(ValueError):
        q.drain(0.0, 5.0, 1.0, 0.0, TABLE)
    with pytest.raises(ValueError):
        q.drain(10.0, 5.0, -1.0, 0.0, TABLE)
