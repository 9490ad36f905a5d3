"""fastuplink - fast uplink grant scheduling for IoT cells driven by hidden Markov events."""

__version__ = "0.1.0"
