"""
One 2x2 window, gate by gate
============================

Builds the four-wire window circuit by hand, watches the state after each
stage, and checks the readout against its closed form.
"""

import numpy as np

from qcnn import (
    Angle,
    Architecture,
    GateKind,
    GateOp,
    ModelParams,
    PureState,
    apply_gate,
    build_plan,
    exact_prob_one,
    pixel_to_angle,
    run_pure,
)

# four pixel intensities from a tiny image, mapped onto rotation angles
pixels = np.array([200, 40, 255, 0])
encode = np.array([pixel_to_angle(p) for p in pixels])
print("pixel encodings (radians):", np.round(encode, 4))

# a trainable angle per wire; any values work, these are arbitrary
kernel = np.array([0.3, 1.1, -0.4, 0.9])

# stage 1: write the data onto the wires with Y rotations
state = PureState.zero(4)
for w in range(4):
    state = apply_gate(state, GateOp(GateKind.RY, (w,), Angle.const(encode[w])))
print("after encoding, wire-1 probabilities:",
      [round(exact_prob_one(state, w), 4) for w in range(4)])

# stage 2: the trainable X rotations
for w in range(4):
    state = apply_gate(state, GateOp(GateKind.RX, (w,), Angle.const(kernel[w])))

# stage 3: entangle neighbours, then the two column heads
for a, b in ((0, 1), (2, 3), (0, 2)):
    state = apply_gate(state, GateOp(GateKind.CFLIP_Z, (a, b)))
    state = apply_gate(state, GateOp(GateKind.CFLIP_Y, (a, b)))

p1 = exact_prob_one(state, 0)
print("readout probability on wire 0:", round(p1, 6))

# the same thing through the prebuilt plan
plan, _ = build_plan(Architecture.CONV)
params = ModelParams((kernel,))
print("prebuilt plan agrees:", np.isclose(run_pure(plan, encode, params), p1))

# the readout has a closed form: the window answers 1 when an odd number of
# wires are excited, and each wire's sign is cos(encoding) * cos(kernel)
closed = 0.5 * (1.0 - np.prod(np.cos(encode) * np.cos(kernel)))
print("closed form:", round(closed, 6), "match:", np.isclose(closed, p1))
