"""
How many samples does the index need?
=====================================

Evaluating every layer on a full training set is expensive, so it helps to
know how quickly the index settles as samples are added. ``subset_sample``
shuffles the data once with a fixed seed and evaluates growing prefixes of
that shuffle; repeating with several seeds shows the spread shrinking.
"""

# %%
import numpy as np

from dataflow_indices import subset_sample

g = np.random.default_rng(4)
n = 3000
labels = g.integers(1, 6, size=n)
X = g.normal(size=(n, 10)) + 1.2 * np.eye(10)[labels - 1] * 3

sizes = [25, 50, 100, 250, 500, 1000, 2000, 3000]
curves = np.array([[v for _, v in subset_sample(X, labels, sizes, seed=s)] for s in range(10)])

# %%
print(" size   mean SI   std over 10 seeds")
for size, col in zip(sizes, curves.T):
    print(f"{size:5d}   {col.mean():.4f}    {col.std():.4f}")
