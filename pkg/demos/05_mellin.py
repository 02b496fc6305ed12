"""The trapezoidal smoothing, its Mellin transform, and getting eta back by inversion."""
import numpy as np

from friable.mellin import SmoothingParams, eta, eta_mellin, mellin_inversion_check, mellin_table

sp = SmoothingParams(xi=0.1, kappa=0.1)
print("eta on a few points:", [eta(z, sp) for z in (0.75, 0.85, 1.0, 1.15, 1.25)])
print(f"transform at s = 1 (area): {eta_mellin(1.0, sp).real:.15f}, 2 kappa + xi = 0.3")

# The closed form has removable singularities at s = 0 and -1.
for s in (1e-3, 1e-9, 0.0):
    print(f"s = {s:g}: {eta_mellin(s, sp)}")

# |eta~(1 + it)| decays like 1/t^2, which sets the inversion cut-off.
for t, re, im in mellin_table(sp, [0, 10, 100, 1000]):
    print(f"t = {t:6.0f}  |eta~| = {np.hypot(re, im):.3e}")

for z in (0.85, 1.0, 1.15, 2.0):
    r = mellin_inversion_check(z, sp)
    print(f"z = {z}: reconstructed {r.reconstructed:.6f}, exact {r.exact}, error {r.error:.1e}")
