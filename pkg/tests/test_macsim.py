import math
import random

import pytest

from uwacomm import macsim
from uwacomm.macsim import (
    CdmaParams,
    FdmaParams,
    Packet,
    Scenario,
    SMacParams,
    Simulator,
    child_seed,
    loss_from_snr,
    run_sim,
)
from uwacomm.macsim.core import Mac, finish


def test_child_seed_stable_and_tag_sensitive():
    a = child_seed(42, "traffic", 3)
    assert a == child_seed(42, "traffic", 3)
    assert a != child_seed(42, "traffic", 4)
    assert a != child_seed(43, "traffic", 3)
    assert 0 <= a < 2**64


def test_loss_from_snr():
    assert loss_from_snr(30.0, 100) < 1e-12
    assert loss_from_snr(0.0, 1) == pytest.approx(0.5 * math.erfc(1.0), rel=1e-12)
    # more bits, more chances to break
    assert loss_from_snr(5.0, 512) > loss_from_snr(5.0, 64)
    with pytest.raises(ValueError):
        loss_from_snr(10.0, 0)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(n_nodes=1)
    with pytest.raises(ValueError):
        Scenario(n_nodes=3, positions=((0.0, 0.0), (1.0, 1.0)))


class PingMac(Mac):
    """Transmit every queued payload immediately; no recovery."""

    def __init__(self, code_by_node=None):
        self.code_by_node = code_by_node or {}

    def enqueue(self, node, payload):
        pkt = Packet(
            "DATA", node, payload.dst, payload.size_bits,
            payload.size_bits / self.sim.scenario.bitrate_bps,
            code=self.code_by_node.get(node),
            meta={"payload": payload},
        )
        payload.transmissions += 1
        self.sim.transmit(node, pkt)

    def on_receive(self, node, pkt):
        if pkt.dst == node:
            self.sim.deliver(pkt.meta["payload"])


def _line_scenario(traffic, duration=20.0, n=3):
    positions = tuple((200.0 * i, 0.0) for i in range(n))
    return Scenario(
        n_nodes=n, comm_range_m=1000.0, duration_s=duration,
        positions=positions, traffic=traffic, data_bits=400, bitrate_bps=1000.0,
    )


def test_propagation_delay_is_range_over_sound_speed():
    scen = _line_scenario(traffic=((1.0, 0, 2),))
    sim = Simulator(scen, PingMac(), seed=0)
    sim.run()
    res = finish(sim)
    rx = [e for e in res.trace if e.event == "rx_start" and e.node == 2]
    assert len(rx) == 1
    assert rx[0].time == pytest.approx(1.0 + 400.0 / 1500.0)


def test_same_code_overlap_collides():
    # both neighbors shout at node 1 at once with no code separation
    scen = _line_scenario(traffic=((1.0, 0, 1), (1.0, 2, 1)))
    sim = Simulator(scen, PingMac(), seed=0)
    sim.run()
    res = finish(sim)
    assert res.metrics.collisions >= 2
    assert res.metrics.delivered == 0


def test_distinct_codes_do_not_collide():
    scen = _line_scenario(traffic=((1.0, 0, 1), (1.0, 2, 1)))
    sim = Simulator(scen, PingMac(code_by_node={0: "c0", 2: "c2"}), seed=0)
    sim.run()
    res = finish(sim)
    assert res.metrics.collisions == 0
    assert res.metrics.delivered == 2


def test_transmitter_is_deaf_while_sending():
    # 0 -> 1 and 1 -> 2 start together; node 1 is mid-transmission when
    # node 0's packet arrives, so it never hears it
    scen = _line_scenario(traffic=((1.0, 1, 2), (1.0, 0, 1)))
    sim = Simulator(scen, PingMac(code_by_node={0: "a", 1: "b"}), seed=0)
    sim.run()
    res = finish(sim)
    delivered_dst = [e.dst for e in res.trace if e.event == "deliver"]
    assert delivered_dst == [2]


def test_trace_rows_format():
    scen = _line_scenario(traffic=((1.0, 0, 2),))
    sim = Simulator(scen, PingMac(), seed=0)
    sim.run()
    rows = finish(sim).trace_rows()
    assert all(len(r) == 6 for r in rows)
    t, node, event, kind, src, dst = rows[0]
    float(t)
    assert "." in t and len(t.split(".")[1]) == 9  # fixed 9-digit time
    assert event == "gen"


@pytest.mark.parametrize("mac_name", ["smac", "cdma", "fdma"])
def test_trace_deterministic_per_seed(mac_name):
    scen = Scenario(n_nodes=5, duration_s=120.0, packet_rate_hz=0.05)
    a = run_sim(mac_name, scen, seed=303)
    b = run_sim(mac_name, scen, seed=303)
    assert a.trace_rows() == b.trace_rows()
    c = run_sim(mac_name, scen, seed=304)
    assert a.trace_rows() != c.trace_rows()


@pytest.mark.parametrize("mac_name", ["smac", "cdma", "fdma"])
def test_conservation_randomized(mac_name):
    rng = random.Random(77)
    for _ in range(6):
        scen = Scenario(
            n_nodes=rng.randrange(2, 7),
            duration_s=rng.uniform(60.0, 200.0),
            packet_rate_hz=rng.uniform(0.01, 0.2),
        )
        res = run_sim(mac_name, scen, seed=rng.randrange(2**32))
        m = res.metrics
        assert m.delivered + m.lost + m.in_flight == m.offered
        assert m.offered == len(res.payloads)


@pytest.mark.parametrize("mac_name", ["smac", "cdma", "fdma"])
def test_time_partition_exact(mac_name):
    scen = Scenario(n_nodes=4, duration_s=173.7, packet_rate_hz=0.08)
    res = run_sim(mac_name, scen, seed=9)
    for nt in res.node_times.values():
        assert nt.tx_s + nt.rx_s + nt.sleep_s + nt.idle_s == scen.duration_s
        assert min(nt.tx_s, nt.rx_s, nt.sleep_s, nt.idle_s) >= 0.0


def _mute_violations(rows):
    """Foreign RTS/CTS heard cleanly must put the hearer to sleep at
    that instant, and it must stay silent until its wake event."""
    violations = 0
    asleep_since: dict[str, str] = {}
    byte_rows = list(rows)
    for i, (t, node, event, kind, src, dst) in enumerate(byte_rows):
        if event == "rx_end" and kind in ("RTS", "CTS") and dst != node:
            mutes = [
                r for r in byte_rows
                if r[0] == t and r[1] == node and r[2] == "sleep" and r[3] == "MUTE"
            ]
            if not mutes:
                violations += 1
        if event == "sleep":
            asleep_since[node] = t
        elif event == "wake":
            asleep_since.pop(node, None)
        elif event == "tx_start" and node in asleep_since:
            violations += 1
    return violations


def test_smac_mute_rule_small():
    scen = Scenario(n_nodes=5, duration_s=150.0, packet_rate_hz=0.1)
    res = run_sim("smac", scen, seed=21)
    rows = res.trace_rows()
    assert any(r[2] == "sleep" and r[3] == "MUTE" for r in rows)
    assert _mute_violations(rows) == 0


def test_smac_delivers_point_to_point():
    scen = Scenario(
        n_nodes=2, area_m=200.0, duration_s=300.0,
        traffic=((5.0, 0, 1), (40.0, 1, 0), (90.0, 0, 1)),
    )
    res = run_sim("smac", scen, seed=3)
    assert res.metrics.delivered == 3
    assert res.metrics.avg_delay_s > 0.0


def test_smac_sleeps_between_cycles():
    scen = Scenario(n_nodes=3, duration_s=200.0, packet_rate_hz=0.0,
                    traffic=())
    res = run_sim("smac", scen, seed=4)
    for nt in res.node_times.values():
        assert nt.sleep_s > 0.4 * scen.duration_s  # duty cycle does its job


def test_cdma_delivers_under_concurrent_load():
    scen = Scenario(n_nodes=6, duration_s=400.0, packet_rate_hz=0.05)
    res = run_sim("cdma", scen, seed=8)
    m = res.metrics
    assert m.offered > 10
    assert m.delivered / m.offered > 0.9


def test_cdma_retry_then_expire():
    # data loss so high most payloads exhaust their retries
    scen = Scenario(n_nodes=2, area_m=100.0, duration_s=400.0,
                    traffic=((10.0, 0, 1),))
    res = run_sim(
        "cdma", scen, seed=5,
        mac_params=CdmaParams(loss_data=0.97, retry_limit=3, backoff_s=0.2),
    )
    p = res.payloads[0]
    assert p.gave_up or p.delivered_s is not None
    if p.gave_up:
        assert p.transmissions == 4  # initial try plus retry_limit


def test_cdma_loss_estimates_match_bernoulli():
    # ack losses force retransmissions; mean transmissions approaches
    # 1/(1-p) like a geometric variable
    spacing = 30.0
    traffic = tuple((5.0 + spacing * i, 0, 1) for i in range(120))
    scen = Scenario(n_nodes=2, area_m=100.0, duration_s=spacing * 121,
                    traffic=traffic)
    res = run_sim(
        "cdma", scen, seed=6,
        mac_params=CdmaParams(loss_data=0.5, retry_limit=40, backoff_s=0.3),
    )
    done = [p for p in res.payloads if p.delivered_s is not None]
    assert len(done) > 100
    mean_tx = sum(p.transmissions for p in done) / len(done)
    assert abs(mean_tx - 2.0) < 3.0 * math.sqrt(2.0 / len(done))


def test_fdma_band_separation():
    # two simultaneous senders in different bands, no collisions
    scen = _line_scenario(traffic=((1.0, 0, 1), (1.0, 2, 1)))
    res_trace = run_sim("fdma", scen, seed=0)
    assert res_trace.metrics.collisions == 0
    assert res_trace.metrics.delivered == 2


def test_fdma_outage_losses():
    traffic = tuple((2.0 * i + 1.0, 0, 1) for i in range(50))
    scen = Scenario(n_nodes=2, area_m=100.0, duration_s=120.0, traffic=traffic)
    res = run_sim("fdma", scen, seed=10, mac_params=FdmaParams(outage_p=0.6))
    m = res.metrics
    assert m.lost > 10
    assert m.delivered + m.lost + m.in_flight == 50


def test_smac_energy_below_always_on():
    # the same traffic handled with duty cycling must cost less than a
    # protocol that never sleeps
    scen = Scenario(n_nodes=4, duration_s=300.0, packet_rate_hz=0.02)
    smac = run_sim("smac", scen, seed=12)
    fdma = run_sim("fdma", scen, seed=12)
    assert smac.metrics.total_energy_j < fdma.metrics.total_energy_j


def test_metrics_normalized_by_offered():
    scen = Scenario(n_nodes=3, duration_s=200.0, packet_rate_hz=0.05)
    res = run_sim("cdma", scen, seed=13)
    m = res.metrics
    assert m.delivery_ratio == pytest.approx(m.delivered / m.offered)
    assert m.energy_per_offered_bit_j == pytest.approx(
        m.total_energy_j / m.offered_bits
    )
