"""Static frequency-division MAC.

The band plan assigns node i the band i mod n_bands; each band gets an
equal slice of the base bitrate, so packets take n_bands times longer
on air.  Transmissions start as soon as a packet is queued (no carrier
sensing, no handshake, no acknowledgement, no retransmission).  Nodes
sharing a band can still collide; different bands never do.  A
per-packet Bernoulli outage models band fading.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import Mac, Packet, Payload


@dataclass(frozen=True)
class FdmaParams:
    n_bands: int = 4
    outage_p: float = 0.0
    guard_s: float = 0.01

    def __post_init__(self):
        if self.n_bands < 1:
            raise ValueError("need at least one band")
        if not 0.0 <= self.outage_p < 1.0:
            raise ValueError(f"outage_p must be in [0, 1), got {self.outage_p}")


class FdmaMac(Mac):
    def __init__(self, params: FdmaParams | None = None):
        self.p = params or FdmaParams()

    def attach(self, sim):
        super().attach(sim)
        self.queues: dict[int, deque[Payload]] = {
            i: deque() for i in range(sim.scenario.n_nodes)
        }
        self.band_rate = sim.scenario.bitrate_bps / self.p.n_bands

    def loss_probability(self, node: int, pkt: Packet) -> float:
        return self.p.outage_p

    def enqueue(self, node: int, payload: Payload):
        self.queues[node].append(payload)
        self._kick(node)

    def _kick(self, node: int):
        q = self.queues[node]
        led = self.sim.nodes[node]
        if not q or led.transmitting:
            return
        payload = q[0]
        band = node % self.p.n_bands
        pkt = Packet(
            "DATA",
            node,
            payload.dst,
            payload.size_bits,
            payload.size_bits / self.band_rate,
            code=f"band{band}",
            meta={"payload": payload},
        )
        payload.transmissions += 1
        self.sim.transmit(node, pkt)

    def on_tx_done(self, node: int, pkt: Packet):
        payload: Payload = pkt.meta["payload"]
        q = self.queues[node]
        if q and q[0] is payload:
            q.popleft()
        self.sim.schedule(
            self.sim.now + self.sim.max_propagation_s + 1e-6,
            lambda: self._finalize(payload),
            node,
        )
        self.sim.schedule(self.sim.now + self.p.guard_s, lambda: self._kick(node), node)

    def _finalize(self, payload: Payload):
        if payload.delivered_s is None:
            self.sim.give_up(payload)

    def on_receive(self, node: int, pkt: Packet):
        if pkt.kind == "DATA" and pkt.dst == node:
            self.sim.deliver(pkt.meta["payload"])
