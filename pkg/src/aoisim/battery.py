"""Energy-queue state machine with capacity clamping and causality accounting.

The battery stores whole energy units. ``capacity=None`` models the
unbounded battery as a distinct representation (no clamp ever applies, so
the no-overflow invariant is exact rather than approximate).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class BatteryState:
    """Integer energy level plus waste / infeasibility counters.

    Counters are monotone over a run: ``wasted_units`` accumulates every
    unit dropped by the capacity clamp, ``infeasible_epochs`` every failed
    discharge attempt.
    """

    level: int = 0
    capacity: int | None = None  # None = unbounded
    wasted_units: int = 0
    infeasible_epochs: int = 0

    def __post_init__(self):
        if self.capacity is not None and self.capacity < 1:
            raise ValueError("capacity must be a positive integer or None")
        if self.level < 0:
            raise ValueError("level must be non-negative")
        if self.capacity is not None and self.level > self.capacity:
            raise ValueError("level exceeds capacity")

    def harvest(self, units: int) -> None:
        """Add ``units`` arrivals, clamping at capacity; overflow is wasted."""
        if units < 0:
            raise ValueError("units must be non-negative")
        if self.capacity is None:
            self.level += units
            return
        total = self.level + units
        if total > self.capacity:
            self.wasted_units += total - self.capacity
            self.level = self.capacity
        else:
            self.level = total

    def try_discharge(self) -> bool:
        """Spend one unit if available.

        Returns True when the update went through. An empty battery is a
        modeled outcome, not a fault: the infeasibility counter increments
        and the call returns False.
        """
        if self.level >= 1:
            self.level -= 1
            return True
        self.infeasible_epochs += 1
        return False

    def copy(self) -> "BatteryState":
        return BatteryState(self.level, self.capacity,
                            self.wasted_units, self.infeasible_epochs)
