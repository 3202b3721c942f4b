"""Duty-cycled contention MAC with schedule synchronization.

Nodes listen for a while after boot; whoever hears no schedule
announcement picks its own listen/sleep phase and becomes a
synchronizer, everyone else follows the first announcement heard.
When two schedules meet, the earlier-anchored one wins by default;
with follow_both_schedules a node keeps waking for the extra listen
windows as well.

Each cycle starts with a listen window (a SYNC slot, then a data
slot), followed by sleep.  Unicast data uses RTS/CTS with carrier
sensing in randomized tiny slots; both control packets advertise how
long the exchange will occupy the channel, and any third node that
overhears one goes back to sleep for that long (trace tag MUTE).
There is no MAC-level acknowledgement: the sender treats the exchange
as finished once its data transmission ends.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

from .core import BROADCAST, Mac, Packet, Payload, child_seed


@dataclass(frozen=True)
class SMacParams:
    cycle_s: float = 2.0
    sync_slot_s: float = 0.25
    data_slot_s: float = 0.75
    tiny_slot_s: float = 0.01
    contention_slots: int = 8
    ctrl_bits: int = 48
    retry_limit: int = 5
    sifs_s: float = 0.01
    sync_every_cycles: int = 5
    follow_both_schedules: bool = False

    def __post_init__(self):
        if self.sync_slot_s + self.data_slot_s >= self.cycle_s:
            raise ValueError("listen window must be shorter than the cycle")
        if self.contention_slots < 1:
            raise ValueError("need at least one contention slot")


class _SNode:
    __slots__ = (
        "rng",
        "origin",
        "extras",
        "role",
        "queue",
        "attempts",
        "state",
        "peer",
        "attempt_token",
        "cycle_token",
        "cycle_count",
    )

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.origin: float | None = None
        self.extras: list[float] = []
        self.role = ""
        self.queue: deque[Payload] = deque()
        self.attempts = 0
        self.state = "idle"
        self.peer = -1
        self.attempt_token = 0
        self.cycle_token = 0
        self.cycle_count = 0


class SMac(Mac):
    def __init__(self, params: SMacParams | None = None):
        self.p = params or SMacParams()

    def attach(self, sim):
        super().attach(sim)
        self.nodes = {
            i: _SNode(random.Random(child_seed(sim.seed, "smac", i)))
            for i in range(sim.scenario.n_nodes)
        }
        self.ctrl_dur = self.p.ctrl_bits / sim.scenario.bitrate_bps
        self.max_prop = sim.max_propagation_s

    def start(self):
        for node, st in self.nodes.items():
            deadline = self.p.cycle_s * (1.0 + st.rng.random())
            self.sim.schedule(deadline, lambda n=node: self._claim_schedule(n), node)

    # -- schedule management ---------------------------------------------

    def _claim_schedule(self, node: int):
        st = self.nodes[node]
        if st.origin is not None:
            return
        st.origin = self.sim.now
        st.role = "sync"
        self._start_cycles(node)

    def _start_cycles(self, node: int):
        st = self.nodes[node]
        st.cycle_token += 1
        token = st.cycle_token
        self.sim.schedule(
            self._next_window_start(st.origin, self.sim.now),
            lambda: self._tick(node, token, primary=True),
            node,
        )
        for origin in st.extras:
            self.sim.schedule(
                self._next_window_start(origin, self.sim.now),
                lambda o=origin: self._extra_tick(node, token, o),
                node,
            )

    def _next_window_start(self, origin: float, now: float) -> float:
        if now <= origin:
            return origin
        n = math.floor((now - origin) / self.p.cycle_s)
        start = origin + n * self.p.cycle_s
        if start < now:
            start += self.p.cycle_s
        return start

    def _in_listen_window(self, origin: float, now: float) -> bool:
        if now < origin:
            return False
        phase = (now - origin) % self.p.cycle_s
        return phase < self.p.sync_slot_s + self.p.data_slot_s

    def _adopt(self, node: int, origin: float):
        st = self.nodes[node]
        if st.origin is None:
            st.origin = origin
            st.role = "follower"
            self._start_cycles(node)
            return
        if abs(origin - st.origin) < 1e-9 or origin in st.extras:
            return
        if origin < st.origin - 1e-9:
            if self.p.follow_both_schedules and len(st.extras) < 4:
                st.extras.append(st.origin)
            st.origin = origin
            st.role = "follower"
            self._start_cycles(node)
        elif self.p.follow_both_schedules and len(st.extras) < 4:
            st.extras.append(origin)
            self._start_cycles(node)

    # -- per-cycle machinery ----------------------------------------------

    def _tick(self, node: int, token: int, primary: bool):
        st = self.nodes[node]
        if token != st.cycle_token:
            return
        start = self.sim.now
        st.cycle_count += 1
        # announce the schedule every cycle right after adopting it, then
        # back off to a staggered period so SYNCs stop trampling each other
        due = st.cycle_count <= 3 or (st.cycle_count + node) % self.p.sync_every_cycles == 0
        if due:
            slot = st.rng.randrange(self.p.contention_slots)
            self.sim.schedule(
                start + slot * self.p.tiny_slot_s, lambda: self._sense_sync(node), node
            )
        data_start = start + self.p.sync_slot_s
        dslot = st.rng.randrange(self.p.contention_slots)
        self.sim.schedule(
            data_start + dslot * self.p.tiny_slot_s, lambda: self._sense_data(node), node
        )
        window_end = start + self.p.sync_slot_s + self.p.data_slot_s
        self.sim.schedule(window_end, lambda: self._maybe_sleep(node), node)
        self.sim.schedule(
            start + self.p.cycle_s, lambda: self._tick(node, token, primary), node
        )

    def _extra_tick(self, node: int, token: int, origin: float):
        st = self.nodes[node]
        if token != st.cycle_token:
            return
        window_end = self.sim.now + self.p.sync_slot_s + self.p.data_slot_s
        self.sim.schedule(window_end, lambda: self._maybe_sleep(node), node)
        self.sim.schedule(
            self.sim.now + self.p.cycle_s,
            lambda: self._extra_tick(node, token, origin),
            node,
        )

    def _sense_sync(self, node: int):
        st = self.nodes[node]
        led = self.sim.nodes[node]
        if not led.awake or led.transmitting or st.state != "idle":
            return
        if self.sim.channel_busy(node):
            return
        pkt = Packet(
            "SYNC",
            node,
            BROADCAST,
            self.p.ctrl_bits,
            self.ctrl_dur,
            meta={"origin": st.origin},
        )
        self.sim.transmit(node, pkt)

    def _sense_data(self, node: int):
        st = self.nodes[node]
        led = self.sim.nodes[node]
        if not led.awake or led.transmitting or st.state != "idle" or not st.queue:
            return
        if self.sim.channel_busy(node):
            return
        payload = st.queue[0]
        data_dur = payload.size_bits / self.sim.scenario.bitrate_bps
        nav = 3.0 * self.max_prop + 2.0 * self.p.sifs_s + self.ctrl_dur + data_dur
        pkt = Packet(
            "RTS",
            node,
            payload.dst,
            self.p.ctrl_bits,
            self.ctrl_dur,
            meta={"nav": nav, "data_dur": data_dur},
        )
        st.state = "await_cts"
        st.peer = payload.dst
        st.attempts += 1
        st.attempt_token += 1
        token = st.attempt_token
        self.sim.transmit(node, pkt)
        timeout = self.ctrl_dur + 2.0 * self.max_prop + self.ctrl_dur + 2.0 * self.p.sifs_s + self.p.tiny_slot_s
        self.sim.schedule(
            self.sim.now + timeout, lambda: self._cts_timeout(node, token), node
        )

    def _cts_timeout(self, node: int, token: int):
        st = self.nodes[node]
        if st.state != "await_cts" or st.attempt_token != token:
            return
        st.state = "idle"
        st.peer = -1
        payload = st.queue[0]
        if st.attempts > self.p.retry_limit:
            st.queue.popleft()
            st.attempts = 0
            self.sim.give_up(payload)
        else:
            self.sim.count_retransmission(payload)
        self._maybe_sleep(node)

    def _data_timeout(self, node: int, token: int):
        st = self.nodes[node]
        if st.state != "await_data" or st.attempt_token != token:
            return
        st.state = "idle"
        st.peer = -1
        self._maybe_sleep(node)

    def _maybe_sleep(self, node: int):
        st = self.nodes[node]
        led = self.sim.nodes[node]
        if not led.awake or led.transmitting or st.state != "idle" or st.origin is None:
            return
        now = self.sim.now
        origins = [st.origin] + st.extras
        if any(self._in_listen_window(o, now) for o in origins):
            return
        next_start = min(self._next_window_start(o, now) for o in origins)
        if next_start > now:
            self.sim.sleep_node(node, next_start, "CYCLE")

    # -- MAC hooks ---------------------------------------------------------

    def enqueue(self, node: int, payload: Payload):
        st = self.nodes[node]
        st.queue.append(payload)

    def on_receive(self, node: int, pkt: Packet):
        st = self.nodes[node]
        if pkt.kind == "SYNC":
            self._adopt(node, pkt.meta["origin"])
            return
        if pkt.kind in ("RTS", "CTS") and pkt.dst != node:
            self._mute(node, pkt)
            return
        if pkt.kind == "RTS" and pkt.dst == node:
            if st.state != "idle":
                return
            st.state = "reply_cts"
            st.peer = pkt.src
            st.attempt_token += 1
            token = st.attempt_token
            data_dur = pkt.meta["data_dur"]
            self.sim.schedule(
                self.sim.now + self.p.sifs_s,
                lambda: self._send_cts(node, pkt.src, data_dur, token),
                node,
            )
            return
        if pkt.kind == "CTS" and pkt.dst == node:
            if st.state != "await_cts" or pkt.src != st.peer:
                return
            st.state = "send_data"
            st.attempt_token += 1
            token = st.attempt_token
            self.sim.schedule(
                self.sim.now + self.p.sifs_s, lambda: self._send_data(node, token), node
            )
            return
        if pkt.kind == "DATA" and pkt.dst == node:
            payload: Payload = pkt.meta["payload"]
            self.sim.deliver(payload)
            if st.state == "await_data" and pkt.src == st.peer:
                st.state = "idle"
                st.peer = -1
                st.attempt_token += 1
            self._maybe_sleep(node)

    def _mute(self, node: int, pkt: Packet):
        st = self.nodes[node]
        if st.state == "await_cts":
            st.state = "idle"
            st.peer = -1
            st.attempt_token += 1
        if st.state in ("reply_cts", "await_data", "send_data"):
            st.state = "idle"
            st.peer = -1
            st.attempt_token += 1
        self.sim.sleep_node(node, self.sim.now + pkt.meta["nav"], "MUTE")

    def _send_cts(self, node: int, dst: int, data_dur: float, token: int):
        st = self.nodes[node]
        led = self.sim.nodes[node]
        if st.state != "reply_cts" or st.attempt_token != token:
            return
        if not led.awake or led.transmitting:
            st.state = "idle"
            return
        nav = 2.0 * self.max_prop + self.p.sifs_s + data_dur
        pkt = Packet("CTS", node, dst, self.p.ctrl_bits, self.ctrl_dur, meta={"nav": nav})
        st.state = "await_data"
        self.sim.transmit(node, pkt)
        timeout = self.ctrl_dur + 2.0 * self.max_prop + self.p.sifs_s + data_dur + 2.0 * self.p.sifs_s
        self.sim.schedule(self.sim.now + timeout, lambda: self._data_timeout(node, token), node)

    def _send_data(self, node: int, token: int):
        st = self.nodes[node]
        led = self.sim.nodes[node]
        if st.state != "send_data" or st.attempt_token != token:
            return
        if not led.awake or led.transmitting or not st.queue:
            st.state = "idle"
            return
        payload = st.queue[0]
        data_dur = payload.size_bits / self.sim.scenario.bitrate_bps
        pkt = Packet(
            "DATA",
            node,
            payload.dst,
            payload.size_bits,
            data_dur,
            meta={"payload": payload},
        )
        payload.transmissions += 1
        self.sim.transmit(node, pkt)

    def on_tx_done(self, node: int, pkt: Packet):
        st = self.nodes[node]
        if pkt.kind == "DATA":
            payload: Payload = pkt.meta["payload"]
            if st.queue and st.queue[0] is payload:
                st.queue.popleft()
            st.attempts = 0
            st.state = "idle"
            st.peer = -1
            self.sim.schedule(
                self.sim.now + self.max_prop + 1e-6,
                lambda: self._finalize(payload),
                node,
            )
        self._maybe_sleep(node)

    def _finalize(self, payload: Payload):
        if payload.delivered_s is None:
            self.sim.give_up(payload)
