"""Circuit plans: ordered gate lists plus the bookkeeping the frontier
engine needs to know when a wire can be traced out."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gates import GateOp


@dataclass(frozen=True)
class CircuitPlan:
    """An ordered gate list over n_wires wires with a single readout wire.

    retire_schedule[i] is the set of wires whose last gate is gates[i]; the
    readout wire and any wire listed in keep_wires are never scheduled for
    retirement, so they stay measurable after the final gate.
    """

    n_wires: int
    gates: tuple
    readout_wire: int
    keep_wires: tuple = ()
    retire_schedule: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "keep_wires", tuple(self.keep_wires))
        if self.n_wires < 1:
            raise ValueError("plan needs at least one wire")
        if not 0 <= self.readout_wire < self.n_wires:
            raise ValueError(f"readout wire {self.readout_wire} out of range")
        for g in gates:
            if not isinstance(g, GateOp):
                raise ValueError(f"plan gates must be GateOp, got {type(g)!r}")
            for w in g.wires:
                if w >= self.n_wires:
                    raise ValueError(f"wire {w} out of range for {self.n_wires}-wire plan")
        for w in self.keep_wires:
            if not 0 <= w < self.n_wires:
                raise ValueError(f"kept wire {w} out of range")

        protected = set(self.keep_wires) | {self.readout_wire}
        last_use = {}
        for i, g in enumerate(gates):
            for w in g.wires:
                last_use[w] = i
        schedule = [frozenset() for _ in gates]
        for w, i in last_use.items():
            if w not in protected:
                schedule[i] = schedule[i] | {w}
        object.__setattr__(self, "retire_schedule", tuple(schedule))

    @property
    def n_data_slots(self) -> int:
        slots = [g.angle.index for g in self.gates if g.angle is not None and g.angle.source == "data"]
        return max(slots) + 1 if slots else 0

    def param_occurrences(self, layer: int, index: int) -> tuple:
        """Gate positions at which trainable angle (layer, index) appears."""
        return tuple(
            i
            for i, g in enumerate(self.gates)
            if g.angle is not None
            and g.angle.source == "param"
            and g.angle.layer == layer
            and g.angle.index == index
        )

    def param_slots(self) -> tuple:
        """All distinct (layer, index) pairs referenced by the plan, sorted."""
        slots = {
            (g.angle.layer, g.angle.index)
            for g in self.gates
            if g.angle is not None and g.angle.source == "param"
        }
        return tuple(sorted(slots))

    def peak_active_width(self) -> int:
        """Largest number of simultaneously live wires when gates run in
        plan order with retirement at last use."""
        seen = set()
        active = 0
        peak = 0
        for i, g in enumerate(self.gates):
            for w in g.wires:
                if w not in seen:
                    seen.add(w)
                    active += 1
            peak = max(peak, active)
            active -= len(self.retire_schedule[i])
        return peak

    def resolved_angles(self, data=None, params=None) -> list:
        """Per-gate resolved angles (None for fixed gates).  Data may be a
        single angle vector or a batch (B, n_data_slots); batched entries
        come back as arrays."""
        out = []
        for g in self.gates:
            out.append(g.angle.resolve(data, params) if g.angle is not None else None)
        return out
