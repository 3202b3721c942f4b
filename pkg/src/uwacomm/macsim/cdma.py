"""Code-division MAC: every node owns a spreading code, and a common
code carries short extended headers (EH) that announce who is about to
transmit to whom.

A transfer is EH on the common code, then the data packet back-to-back
on the sender's own code, then an acknowledgement sent on that same
code by the destination.  Data packets on distinct codes sail through
each other; EH packets share the common code, so overlapping headers
collide and the data that follows goes unheard (the destination never
tuned in).  Missing acknowledgements trigger randomized-backoff
retransmissions up to a retry limit.

Per-kind Bernoulli loss probabilities model everything the geometry
does not (fading, misdetection); they apply after a reception already
survived collisions.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .core import Mac, Packet, Payload, child_seed

COMMON_CODE = "common"


@dataclass(frozen=True)
class CdmaParams:
    eh_bits: int = 32
    ack_bits: int = 16
    retry_limit: int = 5
    loss_eh: float = 0.0
    loss_data: float = 0.0
    loss_ack: float = 0.0
    backoff_s: float = 0.5
    sifs_s: float = 0.05

    def __post_init__(self):
        for name in ("loss_eh", "loss_data", "loss_ack"):
            p = getattr(self, name)
            if not 0.0 <= p < 1.0:
                raise ValueError(f"{name} must be in [0, 1), got {p}")
        if self.retry_limit < 0:
            raise ValueError("retry limit must be >= 0")


class _CNode:
    __slots__ = ("rng", "queue", "attempts", "state", "token", "expecting")

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.queue: deque[Payload] = deque()
        self.attempts = 0
        self.state = "idle"
        self.token = 0
        self.expecting: dict[int, int] = {}


def node_code(node: int) -> str:
    return f"c{node}"


class CdmaMac(Mac):
    def __init__(self, params: CdmaParams | None = None):
        self.p = params or CdmaParams()

    def attach(self, sim):
        super().attach(sim)
        self.nodes = {
            i: _CNode(random.Random(child_seed(sim.seed, "cdma", i)))
            for i in range(sim.scenario.n_nodes)
        }
        rate = sim.scenario.bitrate_bps
        self.eh_dur = self.p.eh_bits / rate
        self.ack_dur = self.p.ack_bits / rate

    def loss_probability(self, node: int, pkt: Packet) -> float:
        return {"EH": self.p.loss_eh, "DATA": self.p.loss_data, "ACK": self.p.loss_ack}[
            pkt.kind
        ]

    def enqueue(self, node: int, payload: Payload):
        st = self.nodes[node]
        st.queue.append(payload)
        self._kick(node)

    def _kick(self, node: int):
        st = self.nodes[node]
        led = self.sim.nodes[node]
        if st.state != "idle" or not st.queue or led.transmitting:
            return
        payload = st.queue[0]
        data_dur = payload.size_bits / self.sim.scenario.bitrate_bps
        pkt = Packet(
            "EH",
            node,
            payload.dst,
            self.p.eh_bits,
            self.eh_dur,
            code=COMMON_CODE,
            meta={"pid": payload.pid, "data_dur": data_dur},
        )
        st.state = "sending_eh"
        st.attempts += 1
        self.sim.transmit(node, pkt)

    def on_tx_done(self, node: int, pkt: Packet):
        st = self.nodes[node]
        if pkt.kind == "EH" and st.state == "sending_eh":
            payload = st.queue[0]
            data_dur = payload.size_bits / self.sim.scenario.bitrate_bps
            data = Packet(
                "DATA",
                node,
                payload.dst,
                payload.size_bits,
                data_dur,
                code=node_code(node),
                meta={"payload": payload},
            )
            st.state = "sending_data"
            payload.transmissions += 1
            self.sim.transmit(node, data)
            return
        if pkt.kind == "DATA" and st.state == "sending_data":
            st.state = "await_ack"
            st.token += 1
            token = st.token
            timeout = 2.0 * self.sim.max_propagation_s + self.p.sifs_s + self.ack_dur + 0.05
            self.sim.schedule(
                self.sim.now + timeout, lambda: self._ack_timeout(node, token), node
            )
            return
        if pkt.kind == "ACK":
            self._kick(node)

    def _ack_timeout(self, node: int, token: int):
        st = self.nodes[node]
        if st.state != "await_ack" or st.token != token:
            return
        payload = st.queue[0]
        if st.attempts > self.p.retry_limit:
            st.queue.popleft()
            st.attempts = 0
            st.state = "idle"
            self.sim.give_up(payload)
            self._kick(node)
            return
        self.sim.count_retransmission(payload)
        st.state = "backoff"
        st.token += 1
        retry_token = st.token
        delay = st.rng.uniform(0.0, self.p.backoff_s * st.attempts)
        self.sim.schedule(self.sim.now + delay, lambda: self._retry(node, retry_token), node)

    def _retry(self, node: int, token: int):
        st = self.nodes[node]
        if st.state != "backoff" or st.token != token:
            return
        st.state = "idle"
        self._kick(node)

    def on_receive(self, node: int, pkt: Packet):
        st = self.nodes[node]
        if pkt.kind == "EH":
            if pkt.dst == node:
                st.expecting[pkt.src] = pkt.meta["pid"]
            return
        if pkt.kind == "DATA":
            if pkt.dst != node:
                return
            payload: Payload = pkt.meta["payload"]
            if st.expecting.get(pkt.src) != payload.pid:
                return
            del st.expecting[pkt.src]
            self.sim.deliver(payload)
            self.sim.schedule(
                self.sim.now + self.p.sifs_s,
                lambda: self._send_ack(node, pkt.src, payload.pid),
                node,
            )
            return
        if pkt.kind == "ACK" and pkt.dst == node:
            if st.state != "await_ack" or not st.queue:
                return
            if pkt.meta["pid"] != st.queue[0].pid:
                return
            st.token += 1
            st.queue.popleft()
            st.attempts = 0
            st.state = "idle"
            self.sim.schedule(self.sim.now + self.p.sifs_s, lambda: self._kick(node), node)

    def _send_ack(self, node: int, dst: int, pid: int):
        led = self.sim.nodes[node]
        if led.transmitting:
            return
        ack = Packet(
            "ACK",
            node,
            dst,
            self.p.ack_bits,
            self.ack_dur,
            code=node_code(dst),
            meta={"pid": pid},
        )
        self.sim.transmit(node, ack)
