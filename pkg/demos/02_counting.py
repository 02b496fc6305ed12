"""Counting smooth numbers with the segmented largest-prime-factor sieve."""
from friable.dickman import default_table
from friable.smooth import pairwise_report, psi, psi_interval_report, psi_report

table = default_table()

print("Psi(100, 5) =", psi(100, 5))
print("Psi(16, 2)  =", psi(16, 2))

# At u = 2 the prediction x rho(u) is off by about 12%, a log(u+1)/log y sized error.
r = psi_report(10 ** 6, 10 ** 3, table)
print(f"Psi(10^6, 10^3) = {r.count}, x rho(2) = {r.prediction:.0f}, rel. error {r.relative_error:+.3f}")

# Short intervals: only long enough ones follow h rho(u).
for h in (10 ** 3, 10 ** 4, 10 ** 5):
    ri = psi_interval_report(10 ** 6, h, 10 ** 3, table)
    print(f"[10^6, 10^6 + {h:>6}]: {ri.count:6d} smooth, h rho(u) = {ri.prediction:9.1f}, "
          f"in validity range: {ri.in_validity_range}")

# Consecutive pairs n, n + 1 both smooth are much rarer than a single smooth n.
p = pairwise_report(10 ** 5, 100, 1, 1, table)
print(f"(x, 2x], x = 10^5, y = 100: {p.single_count} smooth n, {p.count} smooth pairs (n, n+1); "
      f"empirical exponent {p.empirical_exponent:.2f} vs phi = {p.phi}")
