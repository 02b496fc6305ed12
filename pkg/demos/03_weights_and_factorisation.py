"""The weights w_n and the Dirichlet polynomial F = P1 P2 P3^J M they come from."""
from friable import dpoly
from friable.params import toy_params
from friable.weights import support_interval, weight_average, weight_bound_check, weights_enumerate

# A hand-sized instance: q1 in {3}, q2 in {5, 7}, p in {11, 13}, M = {1}.
tiny = toy_params(100, 60, J=1, P1=2, P2=4, P3=7.5)
print("tiny weights:", weights_enumerate(tiny, 1, 10_000, M=[1]).as_dict())

# A toy with the sieved set M.
p = toy_params(1e4, 60, J=1, P1=2, P2=4, P3=7.5)
lo, hi = support_interval(p)
w = weights_enumerate(p, 1, int(hi) + 1)
print(f"toy: {w.ns.size} n with w_n > 0, sum of weights {w.total}, support in [{lo:.0f}, {hi:.0f}]")

# Multiplying the polynomials gives the same coefficients, to the integer.
F = dpoly.factorisation(p)
print("F equals the enumerated weights:", F.as_dict() == w.as_dict())

# The pointwise bound and a short-interval average.
b = weight_bound_check(w)
print(f"largest w_n / bound = {b.max_ratio:.4f} over {b.checked} n")
avg = weight_average(w, 10_000, 2_000)
print(f"average over [10^4, 10^4 + 2000] = {avg.average:.4f}, reference {avg.reference:.4f}")
