"""
Window summaries as a half-resolution image
===========================================

Runs the shared window circuit over every 2x2 patch of a gradient image and
writes the resulting probabilities back out as a PGM at half the size, the
same thing `qcnn featmap` does from the command line.
"""

import numpy as np

from qcnn import conv_feature_map, read_pgm, write_pgm

# a synthetic 8x8 ramp with a bright block in one corner
grid = np.linspace(0, 200, 64).astype(int).reshape(8, 8)
grid[:3, :3] = 255
write_pgm("featmap_input.pgm", grid, comment="synthetic ramp")
print("input image:")
print(grid)

# four kernel angles; zeros would make every window read 0.5 - cos(e)/2-ish,
# so pick something asymmetric
kernel = np.array([0.9, 0.2, 1.4, 0.6])

probs = conv_feature_map(grid, kernel)
print("\nwindow probabilities (4x4):")
print(np.round(probs, 3))

# rescale to pixel range and write the output image
out = np.rint(probs * 255).astype(int)
write_pgm("featmap_output.pgm", out, comment="window summary probabilities")
print("\nwrote featmap_input.pgm and featmap_output.pgm")
print("round trip reads back:", read_pgm("featmap_output.pgm").shape)
