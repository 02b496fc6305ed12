"""Mean values of Dirichlet polynomials, by Simpson and in closed form, and the lemma checks."""
import math

import numpy as np

from friable import acceptance, dpoly

# Two terms beat against each other; the integral is known exactly.
p = dpoly.make_poly([2, 3])
T = 50.0
d = math.log(1.5)
exact = 2 * T * (1 / 4 + 1 / 9) + (2 / 3) * math.sin(T * d) / d
print(f"two-term beat: Simpson {dpoly.mean_value(p, -T, T):.12f}, analytic {exact:.12f}")

# Sum over primes in (10^3, 2 10^3].
P = dpoly.from_primes(1000, 2000)
q = dpoly.mean_value(P, 0.0, 500.0)
e = dpoly.mean_value_exact(P, 0.0, 500.0)
print(f"{len(P)} primes: Simpson {q:.10f}, closed form {e:.10f}")

# The classical mean value bound on random sparse polynomials.
ratios = [dpoly.mvt_check(g, T).ratio for g, T in acceptance.random_polys(0, 20)]
print(f"mean value theorem, 20 random polys: lhs / ((T + X) sum |a_n|^2) in "
      f"[{min(ratios):.3f}, {max(ratios):.3f}]")

# Large values: keep well-spaced points where |G| is big, then bound the discrete sum.
g, T = acceptance.random_polys(0, 1)[0]
T = min(T, 2000.0)
grid = dpoly.make_grid(-T, T, g.n_max)
vals = np.abs(dpoly.evaluate_uniform(g, grid.t_start, grid.step, grid.nodes.size, 0.0))
ws = dpoly.extract_well_spaced(grid.nodes, vals, float(np.quantile(vals, 0.9)))
rep = dpoly.halasz_montgomery_check(g, ws, T)
print(f"{len(ws)} well-spaced large values, discrete mean value ratio {rep.ratio:.4f}")

for name, r in acceptance.lemma_battery(0).items():
    print(f"{name:<24} ratio {r.ratio:.4g}")
