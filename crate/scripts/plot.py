#!/usr/bin/env python3
"""Render charts from a topoedge run directory.

Writes PNGs next to the CSVs it finds:
  te_buckets.csv -> te_buckets.png  (per-class accuracy by entropy bucket)
  sweep.csv      -> sweep.png       (test Macro-F1 by labeled ratio)
  aggregate.csv  -> aggregate.png   (test Macro-F1 and balanced accuracy by method)
"""
import argparse
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def te_buckets(run, path):
    d = pd.read_csv(path, na_values="NA")
    g = d.groupby(["method", "bucket"])[["majority_acc", "minority_acc"]].mean().reset_index()
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, col, title in zip(axes, ["majority_acc", "minority_acc"], ["majority", "minority"]):
        for m, part in g.groupby("method"):
            ax.plot(part["bucket"], part[col], marker="o", label=m)
        ax.set_title(f"{title} accuracy")
        ax.set_xlabel("entropy bucket (low to high)")
    axes[0].set_ylabel("accuracy")
    axes[1].legend()
    fig.tight_layout()
    fig.savefig(os.path.join(run, "te_buckets.png"), dpi=120)


def sweep(run, path):
    d = pd.read_csv(path, na_values="NA")
    fig, ax = plt.subplots(figsize=(5, 4))
    for m, part in d.groupby("method"):
        ax.errorbar(part["label_ratio"], part["macro_f1_mean"], yerr=part["macro_f1_std_pop"], marker="o", capsize=3, label=m)
    ax.set_xlabel("labeled training ratio")
    ax.set_ylabel("test Macro-F1")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(run, "sweep.png"), dpi=120)


def aggregate(run, path):
    d = pd.read_csv(path, na_values="NA")
    t = d[d["split"] == "test"].set_index("method")
    fig, ax = plt.subplots(figsize=(max(5, len(t) * 0.9), 4))
    x = range(len(t))
    ax.bar([i - 0.2 for i in x], t["macro_f1_mean"], 0.4, yerr=t["macro_f1_std_pop"], label="Macro-F1")
    ax.bar([i + 0.2 for i in x], t["b_acc_mean"], 0.4, yerr=t["b_acc_std_pop"], label="balanced acc")
    ax.set_xticks(list(x))
    ax.set_xticklabels(t.index, rotation=30)
    ax.set_ylim(0, 1)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(run, "aggregate.png"), dpi=120)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("run", help="run directory written by topoedge")
    args = ap.parse_args()
    found = False
    for name, fn in [("te_buckets.csv", te_buckets), ("sweep.csv", sweep), ("aggregate.csv", aggregate)]:
        path = os.path.join(args.run, name)
        if os.path.exists(path):
            fn(args.run, path)
            found = True
    if not found:
        raise SystemExit(f"no plottable CSVs in {args.run}")


if __name__ == "__main__":
    main()
