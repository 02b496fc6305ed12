"""How short can [x, x + h] be and still catch a smooth number for almost all x?"""
from friable.scanner import compare_with_theory, fraction_curve, max_gap

X = 10 ** 5
for y in (50, 100, 200):
    f = fraction_curve(X, y, [5, 10, 20, 40, 80])
    print(f"y = {y:3d}: fraction of x in [X, 2X] covered for h = 5..80:", f.round(4))

g = max_gap(1, 10 ** 4, 5)
print(f"largest gap between 5-smooth numbers up to 10^4: {g.max_gap} after {g.argmax}")

# Empirical threshold h* (99% of x covered) against the asymptotic formula.
tab = compare_with_theory(10 ** 6, [50, 100, 200, 400])
for r in tab.rows:
    print(f"y = {r.y:5.0f}  u = {r.u:.2f}  h* = {r.h_empirical:4d}  formula {r.h_formula:.3e}"
          f"{'  (exceeds X)' if r.vacuous else ''}")
print("h* nonincreasing in y:", tab.nonincreasing)
