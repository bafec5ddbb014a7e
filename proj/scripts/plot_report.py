#!/usr/bin/env python3
# Copyright 2026 The rfom2 Authors
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

"""Plot a report CSV written by rfom_cli.

run reports: relative error per engine against the problem index.
sweep reports: relative error per engine against n_quad.
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv")
    parser.add_argument("-o", "--output", default="report.png")
    parser.add_argument("--sweep", action="store_true", help="x axis is n_quad")
    args = parser.parse_args()

    df = pd.read_csv(args.csv)
    df = df[df["status"].isin(["ok", "ok_gap"])]
    x = "n_quad" if args.sweep else "problem_index"
    fig, ax = plt.subplots(figsize=(6, 4))
    for engine, rows in df.groupby("engine"):
        if args.sweep and engine == "arnoldi":
            ax.axhline(rows["rel_error"].iloc[0], color="k", ls="--", label=engine)
            continue
        ax.semilogy(rows[x], rows["rel_error"], marker="o", ms=3, label=engine)
    if args.sweep:
        ax.set_xscale("log")
    ax.set_xlabel(x)
    ax.set_ylabel("relative error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
