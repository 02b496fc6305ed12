"""Dickman's rho: the table, its closed form on [1, 2], and how fast it decays."""
import math

import numpy as np

from friable.dickman import default_table, log_rho, rho, rho_asymptotic_check, rho_ratio, xi

table = default_table()
print(f"table: {table.n_pieces} Chebyshev pieces of degree {table.degree} on [0, {table.u_max}]")

# On [1, 2] integrating the delay equation once gives 1 - log u.
for u in (1.0, 1.5, 2.0):
    print(f"rho({u}) = {rho(table, u):.15f}   1 - log u = {1 - math.log(u):.15f}")

# Beyond that the decay is roughly u^-u; log space keeps it readable.
for u in (3, 5, 10, 20, 50):
    print(f"u = {u:2d}   rho = {rho(table, u):.6e}   log rho = {log_rho(table, u):10.4f}")

# r(u) = -log rho(u) / (u log u) creeps toward 1 very slowly.
rep = rho_asymptotic_check(table, [5, 10, 20, 30, 40, 50])
print("r(u):", np.round(rep.r, 4))

# The ratio law rho(u - v) ~ rho(u) exp(v xi(u)).
for v in (0.5, 1.0, 2.0):
    r = rho_ratio(table, 20.0, v)
    print(f"u = 20, v = {v}: exact {r.exact:.4f}  exp(v xi) {r.predicted:.4f}  xi = {xi(20):.4f}")
