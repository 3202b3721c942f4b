"""Deterministic discrete-event simulation core for acoustic MAC
protocols.

Events live in a heap keyed by (time, sequence-number) so ties resolve
in scheduling order and a given configuration and seed always replays
the identical event sequence.  The medium is range-based: every node
within `comm_range_m` of a transmitter starts receiving after a
propagation delay of distance / sound_speed.

Reception model, applied per receiver:
  - a sleeping or transmitting node hears nothing (half-duplex);
  - two receptions that overlap in time collide unless both packets
    carry spreading codes and the codes differ;
  - starting a transmission or going to sleep aborts any reception in
    progress at that node;
  - a clean reception may still be dropped by a per-kind Bernoulli
    loss probability supplied by the MAC.

Each node keeps an exact time ledger (transmit / receive / sleep, with
idle as the remainder) used by the energy accounting.
"""

from __future__ import annotations

import hashlib
import heapq
import math
import random
from dataclasses import dataclass, field
from typing import Callable

SOUND_SPEED_MS = 1500.0
BROADCAST = -1


def child_seed(master: int, *tags) -> int:
    """Derive an independent stream seed from a master seed and tags."""
    digest = hashlib.sha256(repr((master,) + tags).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def loss_from_snr(snr_db: float, bits: int) -> float:
    """Packet loss probability for a coherent BPSK link at the given
    per-bit SNR: 1 - (1 - Q(sqrt(2 snr)))^bits.  Feeds the per-kind
    Bernoulli loss knobs when a link budget is available."""
    if bits <= 0:
        raise ValueError("packet must carry at least one bit")
    ber = 0.5 * math.erfc(math.sqrt(10.0 ** (snr_db / 10.0)))
    return 1.0 - (1.0 - ber) ** bits


@dataclass
class Packet:
    kind: str
    src: int
    dst: int
    size_bits: int
    duration_s: float
    code: str | None = None
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TraceEvent:
    time: float
    node: int
    event: str
    kind: str
    src: int
    dst: int


@dataclass
class Payload:
    pid: int
    src: int
    dst: int
    size_bits: int
    created_s: float
    delivered_s: float | None = None
    gave_up: bool = False
    transmissions: int = 0


@dataclass(frozen=True)
class Scenario:
    """Node layout and offered traffic.  Explicit positions/traffic
    override the seeded random placement and Poisson arrivals."""

    n_nodes: int = 5
    area_m: float = 500.0
    comm_range_m: float = 800.0
    duration_s: float = 600.0
    packet_rate_hz: float = 0.05
    data_bits: int = 256
    bitrate_bps: float = 1000.0
    positions: tuple[tuple[float, float], ...] | None = None
    traffic: tuple[tuple[float, int, int], ...] | None = None

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("need at least 2 nodes")
        if self.duration_s <= 0 or self.bitrate_bps <= 0:
            raise ValueError("duration and bitrate must be positive")
        if self.positions is not None and len(self.positions) != self.n_nodes:
            raise ValueError("positions must list one (x, y) per node")


@dataclass(frozen=True)
class SimMetrics:
    offered: int
    delivered: int
    lost: int
    in_flight: int
    duplicates: int
    collisions: int
    retransmissions: int
    avg_delay_s: float | None
    delivery_ratio: float
    offered_bits: int
    delivered_bits: int
    throughput_bps: float
    total_energy_j: float
    energy_per_delivered_bit_j: float | None
    energy_per_offered_bit_j: float | None


class _Reception:
    __slots__ = ("packet", "end", "collided", "aborted")

    def __init__(self, packet: Packet, end: float):
        self.packet = packet
        self.end = end
        self.collided = False
        self.aborted = False


class _NodeLedger:
    """Exact tx/rx/sleep time accounting plus radio state."""

    def __init__(self):
        self.awake = True
        self.transmitting = False
        self.active_rx: list[_Reception] = []
        self.tx_s = 0.0
        self.rx_s = 0.0
        self.sleep_s = 0.0
        self.tx_bits = 0
        self.rx_bits = 0
        self._tx_since: float | None = None
        self._rx_since: float | None = None
        self._sleep_since: float | None = None
        self.wake_token = 0

    def begin_tx(self, now: float):
        self.transmitting = True
        self._tx_since = now

    def end_tx(self, now: float):
        self.tx_s += now - self._tx_since
        self._tx_since = None
        self.transmitting = False

    def begin_rx(self, now: float):
        if self._rx_since is None:
            self._rx_since = now

    def end_rx_maybe(self, now: float):
        if self._rx_since is not None and not self.active_rx:
            self.rx_s += now - self._rx_since
            self._rx_since = None

    def begin_sleep(self, now: float):
        self.awake = False
        self._sleep_since = now

    def end_sleep(self, now: float):
        self.sleep_s += now - self._sleep_since
        self._sleep_since = None
        self.awake = True

    def close(self, now: float):
        if self._tx_since is not None:
            self.end_tx(now)
        if self.active_rx:
            self.active_rx.clear()
        self.end_rx_maybe(now)
        if self._sleep_since is not None:
            self.end_sleep(now)


class Mac:
    """Protocol hook points.  Subclasses keep per-node state and drive
    the simulator through transmit/sleep_node/schedule."""

    def attach(self, sim: "Simulator"):
        self.sim = sim

    def start(self):
        pass

    def enqueue(self, node: int, payload: Payload):
        raise NotImplementedError

    def on_receive(self, node: int, pkt: Packet):
        pass

    def on_tx_done(self, node: int, pkt: Packet):
        pass

    def loss_probability(self, node: int, pkt: Packet) -> float:
        return 0.0


class Simulator:
    def __init__(self, scenario: Scenario, mac: Mac, seed: int):
        self.scenario = scenario
        self.mac = mac
        self.seed = seed
        self.now = 0.0
        self._heap: list[tuple[float, int, int, Callable[[], None]]] = []
        self._seq = 0
        self.trace: list[TraceEvent] = []
        self.payloads: list[Payload] = []
        self.counters = {"collisions": 0, "retransmissions": 0, "duplicates": 0}
        self._loss_rng = random.Random(child_seed(seed, "medium"))
        if scenario.positions is not None:
            self.positions = list(scenario.positions)
        else:
            rng = random.Random(child_seed(seed, "layout"))
            self.positions = [
                (rng.uniform(0, scenario.area_m), rng.uniform(0, scenario.area_m))
                for _ in range(scenario.n_nodes)
            ]
        self.nodes = {i: _NodeLedger() for i in range(scenario.n_nodes)}
        self._neighbors: dict[int, list[tuple[int, float]]] = {}
        for i in range(scenario.n_nodes):
            rows = []
            for j in range(scenario.n_nodes):
                if i == j:
                    continue
                d = math.dist(self.positions[i], self.positions[j])
                if d <= scenario.comm_range_m:
                    rows.append((j, d / SOUND_SPEED_MS))
            self._neighbors[i] = rows
        mac.attach(self)

    @property
    def max_propagation_s(self) -> float:
        return self.scenario.comm_range_m / SOUND_SPEED_MS

    # -- event plumbing -------------------------------------------------

    def schedule(self, t: float, fn: Callable[[], None], node: int = BROADCAST):
        """Queue fn at time t; ties order by (node id, scheduling order)."""
        if t < self.now:
            raise ValueError(f"cannot schedule into the past ({t} < {self.now})")
        heapq.heappush(self._heap, (t, node, self._seq, fn))
        self._seq += 1

    def log(self, node: int, event: str, pkt: Packet | None = None, tag: str | None = None):
        kind = tag if tag is not None else (pkt.kind if pkt else "")
        src = pkt.src if pkt else node
        dst = pkt.dst if pkt else node
        self.trace.append(TraceEvent(self.now, node, event, kind, src, dst))

    # -- traffic --------------------------------------------------------

    def _generate_traffic(self):
        sc = self.scenario
        arrivals: list[tuple[float, int, int]] = []
        if sc.traffic is not None:
            arrivals = list(sc.traffic)
        else:
            for node in range(sc.n_nodes):
                rng = random.Random(child_seed(self.seed, "traffic", node))
                t = 0.0
                while True:
                    t += rng.expovariate(sc.packet_rate_hz)
                    if t >= sc.duration_s:
                        break
                    dst = rng.randrange(sc.n_nodes - 1)
                    if dst >= node:
                        dst += 1
                    arrivals.append((t, node, dst))
        arrivals.sort()
        for pid, (t, src, dst) in enumerate(arrivals):
            payload = Payload(pid, src, dst, sc.data_bits, t)
            self.payloads.append(payload)
            self.schedule(t, lambda p=payload: self._arrival(p), src)

    def _arrival(self, payload: Payload):
        self.log(
            payload.src,
            "gen",
            Packet("DATA", payload.src, payload.dst, payload.size_bits, 0.0),
        )
        self.mac.enqueue(payload.src, payload)

    # -- radio ----------------------------------------------------------

    def channel_busy(self, node: int) -> bool:
        led = self.nodes[node]
        return led.transmitting or bool(led.active_rx)

    def transmit(self, node: int, pkt: Packet):
        led = self.nodes[node]
        if not led.awake:
            raise RuntimeError(f"node {node} tried to transmit while asleep")
        if led.transmitting:
            raise RuntimeError(f"node {node} already transmitting")
        self._abort_receptions(node)
        led.begin_tx(self.now)
        led.tx_bits += pkt.size_bits
        self.log(node, "tx_start", pkt)
        self.schedule(self.now + pkt.duration_s, lambda: self._tx_done(node, pkt), node)
        for other, prop in self._neighbors[node]:
            t_start = self.now + prop
            self.schedule(t_start, lambda o=other, p=pkt, e=t_start + pkt.duration_s: self._rx_begin(o, p, e), other)

    def _tx_done(self, node: int, pkt: Packet):
        led = self.nodes[node]
        led.end_tx(self.now)
        self.log(node, "tx_end", pkt)
        self.mac.on_tx_done(node, pkt)

    def _rx_begin(self, node: int, pkt: Packet, end: float):
        led = self.nodes[node]
        if not led.awake or led.transmitting:
            return
        rec = _Reception(pkt, end)
        for other in led.active_rx:
            if self._collides(pkt, other.packet):
                other.collided = True
                rec.collided = True
        led.active_rx.append(rec)
        led.begin_rx(self.now)
        self.log(node, "rx_start", pkt)
        self.schedule(end, lambda: self._rx_done(node, rec), node)

    @staticmethod
    def _collides(a: Packet, b: Packet) -> bool:
        return a.code is None or b.code is None or a.code == b.code

    def _rx_done(self, node: int, rec: _Reception):
        if rec.aborted:
            return
        led = self.nodes[node]
        led.active_rx.remove(rec)
        led.end_rx_maybe(self.now)
        led.rx_bits += rec.packet.size_bits
        if rec.collided:
            self.counters["collisions"] += 1
            self.log(node, "collision", rec.packet)
            return
        p_loss = self.mac.loss_probability(node, rec.packet)
        if p_loss > 0.0 and self._loss_rng.random() < p_loss:
            self.log(node, "loss", rec.packet)
            return
        self.log(node, "rx_end", rec.packet)
        self.mac.on_receive(node, rec.packet)

    def _abort_receptions(self, node: int):
        led = self.nodes[node]
        if led.active_rx:
            for rec in led.active_rx:
                rec.aborted = True
            led.active_rx.clear()
        led.end_rx_maybe(self.now)

    # -- sleep ----------------------------------------------------------

    def sleep_node(self, node: int, until: float, tag: str):
        """Put the radio to sleep until `until` (capped at sim end)."""
        led = self.nodes[node]
        led.wake_token += 1
        token = led.wake_token
        if led.awake:
            if led.transmitting:
                raise RuntimeError(f"node {node} cannot sleep mid-transmission")
            self._abort_receptions(node)
            led.begin_sleep(self.now)
            self.log(node, "sleep", tag=tag)
        until = min(until, self.scenario.duration_s)
        if until > self.now:
            self.schedule(until, lambda: self._wake(node, token), node)
        else:
            self._wake(node, token)

    def wake_node(self, node: int):
        led = self.nodes[node]
        led.wake_token += 1
        self._wake(node, led.wake_token)

    def _wake(self, node: int, token: int):
        led = self.nodes[node]
        if token != led.wake_token or led.awake:
            return
        led.end_sleep(self.now)
        self.log(node, "wake", tag="")

    # -- run ------------------------------------------------------------

    def run(self) -> None:
        self._generate_traffic()
        self.mac.start()
        horizon = self.scenario.duration_s
        while self._heap:
            t, _, _, fn = heapq.heappop(self._heap)
            if t > horizon:
                break
            self.now = t
            fn()
        self.now = horizon
        for led in self.nodes.values():
            led.close(horizon)

    # -- outcomes -------------------------------------------------------

    def deliver(self, payload: Payload):
        if payload.delivered_s is None:
            payload.delivered_s = self.now
            self.log(
                payload.dst,
                "deliver",
                Packet("DATA", payload.src, payload.dst, payload.size_bits, 0.0),
            )
        else:
            self.counters["duplicates"] += 1
            self.log(
                payload.dst,
                "dup",
                Packet("DATA", payload.src, payload.dst, payload.size_bits, 0.0),
            )

    def give_up(self, payload: Payload):
        if not payload.gave_up and payload.delivered_s is None:
            payload.gave_up = True
            self.log(
                payload.src,
                "expire",
                Packet("DATA", payload.src, payload.dst, payload.size_bits, 0.0),
            )

    def count_retransmission(self, payload: Payload):
        self.counters["retransmissions"] += 1
        self.log(
            payload.src,
            "retransmit",
            Packet("DATA", payload.src, payload.dst, payload.size_bits, 0.0),
        )


@dataclass(frozen=True)
class NodeTimes:
    tx_s: float
    rx_s: float
    sleep_s: float
    idle_s: float
    tx_bits: int
    rx_bits: int


@dataclass
class SimResult:
    scenario: Scenario
    seed: int
    trace: list[TraceEvent]
    payloads: list[Payload]
    node_times: dict[int, NodeTimes]
    metrics: SimMetrics

    def trace_rows(self) -> list[tuple[str, str, str, str, str, str]]:
        return [
            (f"{e.time:.9f}", str(e.node), e.event, e.kind, str(e.src), str(e.dst))
            for e in self.trace
        ]


def _neighbors(x: float, steps: int) -> list[float]:
    out = [x]
    lo = hi = x
    for _ in range(steps):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
        out += [lo, hi]
    return out


def _exact_partition(
    duration: float, tx: float, rx: float, sleep: float
) -> tuple[float, float, float, float]:
    """Choose idle so that tx + rx + sleep + idle == duration bit-for-bit.

    idle is the remainder of the duration, but the naive difference can
    leave the left-to-right sum an ulp off after the final rounding, and
    for some operand alignments no idle value lands on the duration at
    all.  Searching one-ulp roundings of the largest accumulated term
    together with the remainder always closes the books; every reported
    value stays within a rounding step of the measured one.
    """
    parts = [tx, rx, sleep]
    big = max(range(3), key=lambda i: parts[i])
    for cand in _neighbors(parts[big], 2):
        trial = list(parts)
        trial[big] = cand
        busy = (trial[0] + trial[1]) + trial[2]
        idle = duration - busy
        for idl in _neighbors(idle, 2):
            if idl >= 0.0 and busy + idl == duration:
                return trial[0], trial[1], trial[2], idl
    # nothing non-negative closed the sum (busy time at or beyond the
    # horizon); keep the plain remainder
    return tx, rx, sleep, duration - ((tx + rx) + sleep)


def finish(sim: Simulator, energy_model=None) -> SimResult:
    """Classify payload outcomes, bill energy, and bundle the run."""
    from . import energy as energy_mod

    model = energy_model if energy_model is not None else energy_mod.EnergyModel()
    duration = sim.scenario.duration_s
    node_times = {}
    for node, led in sim.nodes.items():
        tx, rx, sleep, idle = _exact_partition(
            duration, led.tx_s, led.rx_s, led.sleep_s
        )
        node_times[node] = NodeTimes(
            tx, rx, sleep, idle, led.tx_bits, led.rx_bits
        )
    total_energy = sum(
        energy_mod.node_energy_j(nt, model) for nt in node_times.values()
    )
    offered = len(sim.payloads)
    delivered = [p for p in sim.payloads if p.delivered_s is not None]
    lost = sum(1 for p in sim.payloads if p.delivered_s is None and p.gave_up)
    in_flight = offered - len(delivered) - lost
    delays = [p.delivered_s - p.created_s for p in delivered]
    offered_bits = sum(p.size_bits for p in sim.payloads)
    delivered_bits = sum(p.size_bits for p in delivered)
    metrics = SimMetrics(
        offered=offered,
        delivered=len(delivered),
        lost=lost,
        in_flight=in_flight,
        duplicates=sim.counters["duplicates"],
        collisions=sim.counters["collisions"],
        retransmissions=sim.counters["retransmissions"],
        avg_delay_s=sum(delays) / len(delays) if delays else None,
        delivery_ratio=len(delivered) / offered if offered else 0.0,
        offered_bits=offered_bits,
        delivered_bits=delivered_bits,
        throughput_bps=delivered_bits / duration,
        total_energy_j=total_energy,
        energy_per_delivered_bit_j=total_energy / delivered_bits if delivered_bits else None,
        energy_per_offered_bit_j=total_energy / offered_bits if offered_bits else None,
    )
    return SimResult(sim.scenario, sim.seed, sim.trace, sim.payloads, node_times, metrics)
