#!/usr/bin/env python3
# Copyright 2026 The PF-TS Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the synthetic tabular fixtures under data/.

Both files are stand-ins with the shape of the real tables: a 63-row Ag/Au/Zn
composition table with a hydrogen-yield column in [0, 100], and a 40-row
hyperparameter table with five features and an accuracy column.
"""

import argparse
import csv
import itertools
import pathlib

import numpy as np


def catalyst_rows():
  grid = []
  for i, j in itertools.product(range(11), repeat=2):
    k = 10 - i - j
    if k >= 0:
      grid.append((i / 10, j / 10, k / 10))
  # 66 simplex points, three removed.
  dropped = {(0.9, 0.0, 0.1), (0.0, 0.9, 0.1), (0.1, 0.0, 0.9)}
  grid = [p for p in grid if p not in dropped]
  assert len(grid) == 63
  rng = np.random.default_rng(2024)
  rows = []
  for ag, au, zn in grid:
    x = np.array([ag, au, zn])
    peak = np.exp(-np.sum((x - [0.6, 0.3, 0.1]) ** 2) / 0.06)
    side = 0.55 * np.exp(-np.sum((x - [0.1, 0.2, 0.7]) ** 2) / 0.04)
    base = 0.15 * (1.0 - zn)
    value = 100.0 * (0.8 * peak + side + base) / 1.1
    value += rng.normal(0.0, 1.5)
    rows.append((ag, au, zn, float(np.clip(value, 0.0, 100.0))))
  return rows


def lcbench_rows():
  rng = np.random.default_rng(40)
  rows = []
  for _ in range(40):
    batch = int(2 ** rng.integers(4, 10))
    units = int(2 ** rng.integers(6, 11))
    lr = float(10 ** rng.uniform(-4, -1))
    momentum = float(rng.uniform(0.1, 0.99))
    decay = float(10 ** rng.uniform(-5, -1))
    score = (
        -0.6 * (np.log10(lr) + 2.3) ** 2
        - 0.3 * (np.log2(batch) - 6) ** 2 / 4
        + 0.2 * np.log2(units) / 10
        + 0.3 * momentum
        - 0.4 * (np.log10(decay) + 4) ** 2 / 4
    )
    accuracy = 0.70 + 0.28 / (1.0 + np.exp(-2.0 * score))
    accuracy += rng.normal(0.0, 0.003)
    rows.append((batch, units, lr, momentum, decay, float(accuracy)))
  return rows


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  parser.add_argument(
      "--out",
      type=pathlib.Path,
      default=pathlib.Path(__file__).resolve().parent.parent / "data")
  args = parser.parse_args()
  args.out.mkdir(parents=True, exist_ok=True)

  with open(args.out / "ocx24_synthetic.csv", "w", newline="") as f:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(["x_ag", "x_au", "x_zn", "fe-h2"])
    for ag, au, zn, y in catalyst_rows():
      writer.writerow([f"{ag:.1f}", f"{au:.1f}", f"{zn:.1f}", f"{y:.4f}"])

  with open(args.out / "lcbench_synthetic.csv", "w", newline="") as f:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow([
        "batch_size", "num_units", "learning_rate", "momentum",
        "weight_decay", "accuracy"
    ])
    for row in lcbench_rows():
      b, u, lr, m, wd, acc = row
      writer.writerow(
          [b, u, f"{lr:.6g}", f"{m:.4f}", f"{wd:.6g}", f"{acc:.5f}"])


if __name__ == "__main__":
  main()
