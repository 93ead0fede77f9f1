"""
Layer-wise evaluation from activation dumps
===========================================

Activations exported from a trained network are evaluated one layer at a
time. Each layer is a file (CSV, or the ``DFLW`` binary tensor format for
anything large; conv maps of shape ``(Q, H, W, C)`` are flattened
automatically), and a manifest lists them in order together with the label
file.

No network is trained here. Instead three synthetic "layers" pull each class
progressively toward its centroid, standing in for a feature extractor
that improves separation with depth. The script writes the files, then
drives the ``layers`` subcommand exactly as on real dumps, and leaves a JSON
report, a CSV and an SVG chart in ``demo_output/``.
"""

# %%
from pathlib import Path

import numpy as np

from dataflow_indices.cli import main
from dataflow_indices.io import write_csv, write_tensor

out = Path("demo_output")
out.mkdir(exist_ok=True)
g = np.random.default_rng(3)


def dump(split: str, n: int) -> Path:
    labels = np.repeat(np.arange(1, 5), n // 4)
    centroids = g.normal(size=(4, 8))
    base = g.normal(size=(n, 8)) * 1.5
    write_csv(out / f"{split}_labels.csv", labels)
    lines = [f"labels: {split}_labels.csv"]
    for depth, pull in enumerate([0.0, 0.3, 0.6, 0.85, 0.97], start=1):
        act = (1 - pull) * base + pull * centroids[labels - 1]
        # store as a (Q, 2, 4) "feature map" to show flattening of higher ranks
        write_tensor(out / f"{split}_layer{depth}.dflw", act.reshape(n, 2, 4))
        lines.append(f"block{depth} = {split}_layer{depth}.dflw")
    manifest = out / f"{split}.txt"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest


train, test = dump("train", 400), dump("test", 200)

# %%
# Externally measured classification rates can be joined by layer name and
# drawn on the same chart; they are never computed by this package.
(out / "ccr.csv").write_text("layer,train,test\nblock1,0.35,0.3\nblock3,0.8,0.7\nblock5,0.99,0.93\n")

code = main([
    "layers", str(train), "--test-manifest", str(test), "--ccr", str(out / "ccr.csv"),
    "--out", str(out / "layers.json"), "--format", "csv", "--format", "svg",
])
print("exit code", code)
print((out / "layers.csv").read_text())
