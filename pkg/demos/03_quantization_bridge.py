"""
From regression to classification
=================================

A scalar target binned into ``n_c`` equal-width levels turns a regression
problem into an ``n_c``-class one. Under a metric where same-level targets
are at distance zero and different levels infinitely far apart, the
smoothness index of the labels collapses to the separation index. This
script walks through that bridge and shows how the separation of the binned
problem behaves as the number of levels grows.
"""

# %%
import numpy as np

from dataflow_indices import quantize_targets, separation_index, si_smi_bridge, smoothness_index, whiten

g = np.random.default_rng(2)
x = np.sort(g.uniform(0, 2 * np.pi, size=400)).reshape(-1, 1)
y = np.sin(x[:, 0]) + 0.05 * g.normal(size=400)

# %%
labels, spec = quantize_targets(y, 5)
print(f"levels: 5, width rho = {spec.rho:.4f}, range [{spec.y_min:.3f}, {spec.y_max:.3f}]")
print("level counts:", np.bincount(labels)[1:])

# %%
# The bridge value and the separation index are the same number, bit for bit.
print("SI     =", separation_index(x, labels))
print("bridge =", si_smi_bridge(x, labels))

# %%
# More levels means narrower bins and more boundary crossings between
# neighbours; the whitened-target smoothness index is the limit the binned
# problem approaches.
for n_c in (2, 5, 10, 20, 50):
    lab, _ = quantize_targets(y, n_c)
    print(f"n_c = {n_c:>2d}  SI = {separation_index(x, lab):.4f}")
yw, _ = whiten(y)
print(f"continuous SmI = {smoothness_index(x, yw):.4f}")
