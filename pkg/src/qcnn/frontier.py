"""Frontier evaluation: keep a density matrix over only the wires that are
currently live, allocating each wire at its first gate and tracing it out at
its last.  Block-structured wide circuits then cost memory in the peak live
width instead of the total wire count."""
from __future__ import annotations

import numpy as np

from ._contract import apply_to_density, density_prob_one, trace_out
from .gates import GateOp, gate_matrix
from .plans import CircuitPlan

DEFAULT_WIDTH_CAP = 12


class FrontierWidthError(RuntimeError):
    """Raised when a plan needs more simultaneously live wires than the cap."""

    def __init__(self, peak_width: int, cap: int):
        self.peak_width = peak_width
        self.cap = cap
        super().__init__(
            f"plan needs {peak_width} simultaneously live wires, exceeding the cap of {cap}"
        )


class FrontierState:
    """Density matrix over the currently active wires.

    active_map maps logical wire index to its local position; local position
    0 is the most significant bit of the density-matrix index.  New wires are
    appended at the least significant end in |0><0|.
    """

    def __init__(self, width_cap: int = DEFAULT_WIDTH_CAP, validate: bool = False):
        if width_cap < 1:
            raise ValueError("width cap must be >= 1")
        self.width_cap = width_cap
        self.validate = validate
        self._active: list = []
        self.rho = np.ones((1, 1), dtype=np.complex128)
        self.peak_width = 0

    @property
    def active_map(self) -> dict:
        return {w: i for i, w in enumerate(self._active)}

    @property
    def n_active(self) -> int:
        return len(self._active)

    def allocate(self, wire: int) -> None:
        if wire in self._active:
            raise ValueError(f"wire {wire} is already active")
        if len(self._active) + 1 > self.width_cap:
            raise FrontierWidthError(len(self._active) + 1, self.width_cap)
        fresh = np.zeros((2, 2), dtype=np.complex128)
        fresh[0, 0] = 1.0
        self.rho = np.kron(self.rho, fresh)
        self._active.append(wire)
        self.peak_width = max(self.peak_width, len(self._active))
        self._check()

    def apply(self, gate: GateOp, angle=None) -> None:
        pos = []
        for w in gate.wires:
            if w not in self._active:
                raise ValueError(f"wire {w} is not active")
            pos.append(self._active.index(w))
        mat = gate_matrix(gate, angle)
        self.rho = apply_to_density(self.rho, mat, pos, len(self._active))
        self._check()

    def retire(self, wire: int) -> None:
        if wire not in self._active:
            raise ValueError(f"wire {wire} is not active")
        pos = self._active.index(wire)
        self.rho = trace_out(self.rho, pos, len(self._active))
        self._active.pop(pos)
        self._check()

    def prob_one(self, wire: int) -> float:
        if wire not in self._active:
            raise ValueError(f"wire {wire} is not active")
        pos = self._active.index(wire)
        return float(density_prob_one(self.rho, pos, len(self._active)))

    def _check(self) -> None:
        # Trace, hermiticity and positivity drift only through fp error;
        # checking is O(d**3) so it stays behind the validate flag.
        if not self.validate:
            return
        tr = np.trace(self.rho)
        if abs(tr - 1.0) > 1e-9:
            raise AssertionError(f"frontier trace drifted to {tr}")
        if np.max(np.abs(self.rho - self.rho.conj().T)) > 1e-9:
            raise AssertionError("frontier density matrix lost hermiticity")
        eigs = np.linalg.eigvalsh(self.rho)
        if eigs.min() < -1e-8:
            raise AssertionError(f"frontier density matrix has eigenvalue {eigs.min()}")


def frontier_run(
    plan: CircuitPlan,
    data=None,
    params=None,
    *,
    width_cap: int = DEFAULT_WIDTH_CAP,
    validate: bool = False,
) -> float:
    """Evaluate a plan with the frontier engine and return the readout-wire
    probability of 1.  Equals the full state-vector result for any plan.

    Wires appear in the density matrix only between their first gate and the
    retire point recorded in the plan; wires no gate touches stay |0>.
    """
    state = FrontierState(width_cap=width_cap, validate=validate)
    for i, gate in enumerate(plan.gates):
        for w in gate.wires:
            if w not in state._active:
                state.allocate(w)
        angle = gate.angle.resolve(data, params) if gate.angle is not None else None
        state.apply(gate, angle)
        for w in plan.retire_schedule[i]:
            state.retire(w)
    if plan.readout_wire not in state._active:
        return 0.0  # untouched readout wire is still |0>
    return state.prob_one(plan.readout_wire)
