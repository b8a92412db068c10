"""K-functionals and the real interpolation scale.

For (L^1, L^inf) the K-functional is the integral of the decreasing
rearrangement, which gives an exact check.  The dyadic (theta, q) norm is then
compared with the matching Lorentz norm over a random family.
"""
import numpy as np

from hlskit import SimpleFunction, k_functional, lorentz_norm, theta_norm
from hlskit.kfunctional import interpolation_exponent, rearrangement_integral
from hlskit.suites import random_family

f = SimpleFunction((2.0, 1.0), (0.5, 0.5))
for t in (0.25, 0.75, 2.0):
    print(f"t={t}: K = {k_functional(f, t, ('1', 'inf')):.6f}, "
          f"integral of f* = {rearrangement_integral(f, t):.6f}")

# K(t) for an unequal couple is concave and saturates at ||f||_u
ts = np.geomspace(1e-2, 1e2, 9)
print("K(t; L^2, L^4):", np.round([k_functional(f, t, ("2", "4")) for t in ts], 5),
      "||f||_2 =", round(f.norm("2"), 5))

family = random_family(40)
for u, v, theta, q in [("1", "inf", "1/2", "2"), ("1", "3", "1/3", "1"), ("2", "4", "1/2", "inf")]:
    p = 1 / interpolation_exponent(u, v, theta)
    r = np.array([theta_norm(g, (u, v), theta, q) / lorentz_norm(g, p, q) for g in family])
    print(f"(L^{u}, L^{v})_{{{theta},{q}}} vs L^({p},{q}): ratio in [{r.min():.4f}, {r.max():.4f}]")
