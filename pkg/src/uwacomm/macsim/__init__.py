"""Discrete-event MAC simulations: S-MAC style duty cycling, per-node
spreading codes, and static FDMA, over a range-based acoustic medium."""

from .cdma import CdmaMac, CdmaParams
from .core import (
    BROADCAST,
    Mac,
    Packet,
    Payload,
    Scenario,
    SimMetrics,
    SimResult,
    Simulator,
    TraceEvent,
    child_seed,
    finish,
    loss_from_snr,
)
from .energy import EnergyModel, NodeEnergy, energy_account
from .fdma import FdmaMac, FdmaParams
from .smac import SMac, SMacParams

MAC_NAMES = ("smac", "cdma", "fdma")


def make_mac(name: str, params=None) -> Mac:
    if name == "smac":
        return SMac(params)
    if name == "cdma":
        return CdmaMac(params)
    if name == "fdma":
        return FdmaMac(params)
    raise ValueError(f"unknown MAC {name!r}; expected one of {MAC_NAMES}")


def run_sim(
    mac: str,
    scenario: Scenario,
    seed: int,
    mac_params=None,
    energy_model: EnergyModel | None = None,
) -> SimResult:
    """Build, run, and summarize one simulation."""
    sim = Simulator(scenario, make_mac(mac, mac_params), seed)
    sim.run()
    return finish(sim, energy_model)


__all__ = [
    "BROADCAST",
    "CdmaMac",
    "CdmaParams",
    "EnergyModel",
    "FdmaMac",
    "FdmaParams",
    "Mac",
    "MAC_NAMES",
    "NodeEnergy",
    "Packet",
    "Payload",
    "Scenario",
    "SimMetrics",
    "SimResult",
    "SMac",
    "SMacParams",
    "Simulator",
    "TraceEvent",
    "child_seed",
    "energy_account",
    "finish",
    "loss_from_snr",
    "make_mac",
    "run_sim",
]
