"""Energy, cost, carbon and life-cycle-cost evaluation of building retrofit measures."""

__version__ = "0.1.0"
