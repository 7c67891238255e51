"""Friedrichs-model resonance lab: poles, Gamov vectors, decay dynamics and a brute-force oracle."""

__version__ = "0.1.0"
