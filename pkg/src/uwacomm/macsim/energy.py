"""Energy billing from the per-node time and bit ledgers.

Transmit and receive cost scale with bits moved; idle listening and
sleep burn constant power.  The four time buckets partition the whole
simulation interval, so idle time is simply what is left over.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EnergyModel:
    """Defaults follow acoustic modem power profiles: ~10 W to drive
    the projector at a 1 kbps base rate, ~0.5 W to listen (receiving
    costs the same per second at that rate), milliwatts asleep.  Idle
    listening dominating the budget is what makes duty cycling pay."""

    tx_j_per_bit: float = 0.01
    rx_j_per_bit: float = 5e-4
    idle_w: float = 0.5
    sleep_w: float = 0.001

    def __post_init__(self):
        for name in ("tx_j_per_bit", "rx_j_per_bit", "idle_w", "sleep_w"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class NodeEnergy:
    tx_j: float
    rx_j: float
    idle_j: float
    sleep_j: float

    @property
    def total_j(self) -> float:
        return self.tx_j + self.rx_j + self.idle_j + self.sleep_j


def node_energy_j(times, model: EnergyModel) -> float:
    """Total energy for one node's ledger (NodeTimes-shaped)."""
    return (
        times.tx_bits * model.tx_j_per_bit
        + times.rx_bits * model.rx_j_per_bit
        + times.idle_s * model.idle_w
        + times.sleep_s * model.sleep_w
    )


def energy_account(result, model: EnergyModel | None = None) -> dict[int, NodeEnergy]:
    """Per-node energy breakdown for a finished simulation."""
    model = model or EnergyModel()
    report = {}
    for node, nt in result.node_times.items():
        report[node] = NodeEnergy(
            tx_j=nt.tx_bits * model.tx_j_per_bit,
            rx_j=nt.rx_bits * model.rx_j_per_bit,
            idle_j=nt.idle_s * model.idle_w,
            sleep_j=nt.sleep_s * model.sleep_w,
        )
    return report
