"""Numerical side of the scaling argument.

1. The dilation identity holds on matched grids up to rounding.
2. The norm ratio drifts like a power of the dilation when the balance fails.
3. At lambda = N the ratio keeps growing under refinement; below it settles.
"""
import numpy as np

from hlskit import Axis, IndexSpec, TestFunctionSpec, blowup_probe, dilation_check, drift_estimate

gauss = TestFunctionSpec("gaussian_product", {"widths": 0.5})
axes = [Axis(-2, 2, 64)] * 2

for lam in (0.5, 1.5):
    errs = [dilation_check(gauss, lam, a, axes=axes) for a in (0.5, 2, 4)]
    print(f"dilation, lambda={lam}: max rel error {max(errs):.2e}")

line = [Axis(-3, 3, 256)]
for lam in ("3/4", "1/2"):
    spec = IndexSpec.parse("1", "2", "4", lam)
    res = drift_estimate(gauss, spec, axes=line)
    print(f"drift at lambda={lam}: slope {res.fitted_slope:+.4f}, "
          f"expected {res.metadata['theoretical_slope']}")
    print(res.to_csv(), end="")

cells = [64, 128, 256, 512]
bad = blowup_probe("lambda_equals_N", cells)
good = blowup_probe(IndexSpec.parse("1", "2", "4", "3/4"), cells)
print("lambda = 1, p = q = 2:", np.round(bad.values, 4), "increments", np.round(bad.relative_increments(), 3))
print("lambda = 3/4, p=2 q=4:", np.round(good.values, 4), "last change", f"{good.last_relative_change():.2e}")
