"""Underwater acoustic link and MAC simulator: finite-field block
codes, interleaving, a spreading/absorption channel, direct-sequence
spread spectrum, and discrete-event MAC comparisons."""

__version__ = "0.1.0"
