"""Energy-efficient iterative waterfilling for the MIMO broadcast channel."""

__version__ = "0.1.0"
