"""collisim - collisional model simulator for non-Markovian qubit dynamics."""

__version__ = "0.1.0"
