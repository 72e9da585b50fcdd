#!/usr/bin/env python3
"""Regenerates the bundled CSV datasets under data/.

Everything here is synthetic and deterministic; the benchmark surrogates are
small Gaussian-mixture problems sized so the full default grids finish fast.
"""
import json
import os

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


def write_csv(name, header, rows):
    path = os.path.join(DATA, name)
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")
    print("wrote", path, len(rows), "rows")


def write_manifest(name, source, label_column, pos, neg, normalize=True,
                   ds_name=None):
    mf = {
        "source_path": source,
        "label_column": label_column,
        "positive_classes": pos,
        "negative_classes": neg,
        "normalize": normalize,
    }
    if ds_name:
        mf["name"] = ds_name
    path = os.path.join(DATA, name)
    with open(path, "w") as f:
        json.dump(mf, f, indent=2)
        f.write("\n")
    print("wrote", path)


def knn_entropy_fixture():
    # Two far-apart 1-D clusters of 12 points each; within a cluster every
    # point's 11 nearest neighbors are the other 11 cluster members.
    rows = []
    # cluster L: query row 0 is negative with 9 negative / 2 positive neighbors
    labels_l = ["neg"] + ["neg"] * 9 + ["pos"] * 2
    for i, lab in enumerate(labels_l):
        rows.append([f"{0.01 * i:.2f}", lab])
    # cluster R: query row 12 is negative with 6 negative / 5 positive neighbors
    labels_r = ["neg"] + ["neg"] * 6 + ["pos"] * 5
    for i, lab in enumerate(labels_r):
        rows.append([f"{10.0 + 0.01 * i:.2f}", lab])
    write_csv("knn_entropy_fixture.csv", ["x", "label"],
              [[r[0], r[1]] for r in rows])
    write_manifest("knn_entropy_fixture.manifest.json",
                   "knn_entropy_fixture.csv", "label", ["pos"], ["neg"],
                   normalize=False)


def grouped_multiclass():
    # Multiclass source with eight raw classes; the manifest groups 1,2,6 vs
    # 3,4,5 and drops classes 7 and 8.
    rng = np.random.default_rng(20240811)
    sizes = {1: 35, 2: 20, 3: 143, 4: 77, 5: 52, 6: 5, 7: 2, 8: 2}
    centers = {c: rng.normal(0, 2.0, size=7) for c in sizes}
    rows = []
    for c, n in sizes.items():
        X = centers[c] + rng.normal(0, 0.7, size=(n, 7))
        for x in X:
            rows.append([f"{v:.5f}" for v in x] + [str(c)])
    rng.shuffle(rows)
    header = [f"f{i}" for i in range(1, 8)] + ["class"]
    write_csv("grouped8.csv", header, rows)
    write_manifest("grouped8_126v345.manifest.json", "grouped8.csv", "class",
                   ["1", "2", "6"], ["3", "4", "5"], ds_name="grouped8_126v345")


def blobs(rng, n, center, spread, dim):
    return center + rng.normal(0, spread, size=(n, dim))


def separable_fixture():
    # Criterion fixture: two tight 2-D blobs, IR 5, gap of 12 spreads.
    rng = np.random.default_rng(7)
    pos = blobs(rng, 12, np.array([0.0, 0.0]), 0.5, 2)
    neg = blobs(rng, 60, np.array([6.0, 0.0]), 0.5, 2)
    rows = [[f"{x:.5f}", f"{y:.5f}", "pos"] for x, y in pos]
    rows += [[f"{x:.5f}", f"{y:.5f}", "neg"] for x, y in neg]
    rng.shuffle(rows)
    write_csv("blobs_sep.csv", ["x", "y", "label"], rows)
    write_manifest("blobs_sep.manifest.json", "blobs_sep.csv", "label",
                   ["pos"], ["neg"])


def overlap_surrogates():
    # Three imbalanced overlapping problems (IR 4..6) for the benchmark runs.
    rng = np.random.default_rng(99)

    pos = blobs(rng, 30, np.array([0.0, 0.0]), 0.9, 2)
    neg = np.vstack([
        blobs(rng, 80, np.array([1.6, 0.3]), 1.0, 2),
        blobs(rng, 40, np.array([-0.5, -1.8]), 0.8, 2),
    ])
    rows = [[f"{a:.5f}", f"{b:.5f}", "pos"] for a, b in pos]
    rows += [[f"{a:.5f}", f"{b:.5f}", "neg"] for a, b in neg]
    rng.shuffle(rows)
    write_csv("clouds4.csv", ["x", "y", "label"], rows)
    write_manifest("clouds4.manifest.json", "clouds4.csv", "label", ["pos"],
                   ["neg"])

    # compact core inside a loose shell
    n_pos, n_neg = 24, 120
    core = blobs(rng, n_pos, np.array([0.0, 0.0]), 0.55, 2)
    angles = rng.uniform(0, 2 * np.pi, n_neg)
    radii = rng.normal(1.4, 0.45, n_neg)
    shell = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    rows = [[f"{a:.5f}", f"{b:.5f}", "pos"] for a, b in core]
    rows += [[f"{a:.5f}", f"{b:.5f}", "neg"] for a, b in shell]
    rng.shuffle(rows)
    write_csv("ring5.csv", ["x", "y", "label"], rows)
    write_manifest("ring5.manifest.json", "ring5.csv", "label", ["pos"],
                   ["neg"])

    # 4-D smear with a noisy boundary
    pos = blobs(rng, 22, np.zeros(4), 1.0, 4)
    neg = blobs(rng, 132, np.array([1.3, 1.0, 0.0, -0.6]), 1.1, 4)
    rows = [[f"{v:.5f}" for v in x] + ["pos"] for x in pos]
    rows += [[f"{v:.5f}" for v in x] + ["neg"] for x in neg]
    rng.shuffle(rows)
    write_csv("smear6.csv", [f"f{i}" for i in range(1, 5)] + ["label"], rows)
    write_manifest("smear6.manifest.json", "smear6.csv", "label", ["pos"],
                   ["neg"])


if __name__ == "__main__":
    os.makedirs(DATA, exist_ok=True)
    knn_entropy_fixture()
    grouped_multiclass()
    separable_fixture()
    overlap_surrogates()
