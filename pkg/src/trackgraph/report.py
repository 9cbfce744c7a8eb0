r"""
Constants report, run report, and file emission (CSV, JSON, figures).

All integers are written in decimal and all rationals as "p/q" strings, so
reports are diff-able and exact.  Equal seeds produce byte-identical
reports.  The report path also renders a small set of matplotlib figures
next to the delimited output.
"""

import csv
import json
import os
from fractions import Fraction


def rat(x):
    """Exact decimal/fraction string for a report cell."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    if x is None:
        return ""
    return str(x)


class ConstantsReport:
    """Measured universal constants with their provenance; append-only."""

    FIELDS = ("D_vcycle_diam", "C_lipschitz", "Q_fit", "D_fellow_travel",
              "delta_estimate", "k_uniform", "k0_pants", "q_cycle_decomp",
              "vertex_cycle_count_max")

    def __init__(self):
        self.entries = []

    def record(self, field, value, surface, seed, sample_size):
        if field not in self.FIELDS:
            raise KeyError(field)
        self.entries.append({
            "field": field,
            "value": Fraction(value),
            "surface": surface,
            "seed": seed,
            "sample_size": sample_size,
        })

    def value(self, field):
        vals = [e["value"] for e in self.entries if e["field"] == field]
        return max(vals) if vals else None

    def to_json(self):
        return [{**e, "value": rat(e["value"])} for e in self.entries]


class RunReport:
    """Per-check pass/fail bookkeeping; no check is silently skipped, and
    truncated distance queries are counted apart from failures."""

    def __init__(self, config):
        self.config = config
        self.checks = []
        self.constants = ConstantsReport()

    def add_check(self, name, surface, samples, violations, truncated,
                  value=None, seconds=0.0, note=""):
        self.checks.append({
            "check": name,
            "surface": surface,
            "samples": samples,
            "violations": violations,
            "truncated": truncated,
            "value": value,
            "seconds": round(seconds, 2),
            "note": note,
        })

    def passed(self):
        return all(c["violations"] == 0 for c in self.checks)

    def write_csv(self, path):
        """Deterministic check table: equal seeds give equal bytes, so the
        wall-clock timings go to a separate file."""
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["check", "surface", "samples", "violations",
                        "truncated", "value", "note"])
            for c in self.checks:
                w.writerow([c["check"], c["surface"], rat(c["samples"]),
                            rat(c["violations"]), rat(c["truncated"]),
                            rat(c["value"]), c["note"]])

    def write_timings(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["check", "seconds"])
            for c in self.checks:
                w.writerow([c["check"], c["seconds"]])

    def write_constants(self, path):
        payload = {
            "config": self.config,
            "constants": self.constants.to_json(),
            "checks": [{k: (rat(v) if k == "value" else v)
                        for k, v in c.items() if k != "seconds"}
                       for c in self.checks],
        }
        with open(path, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")


def render_figures(outdir, data):
    """
    Render the report figures: single-split displacement histogram, the
    distance-vs-intersection scatter with its linear bound, level-set sizes
    across the scale grid, and the per-stage distance series of the
    projectivized-coordinate diagnostic.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    figdir = os.path.join(outdir, "figures")
    os.makedirs(figdir, exist_ok=True)

    if data.get("split_displacements"):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        vals = data["split_displacements"]
        ax.hist(vals, bins=range(0, max(vals) + 2), color="#4878d0",
                edgecolor="black", align="left")
        ax.set_xlabel("single-split displacement of the representative curve")
        ax.set_ylabel("count")
        fig.tight_layout()
        fig.savefig(os.path.join(figdir, "split_displacement.png"), dpi=150)
        plt.close(fig)

    if data.get("dist_vs_i"):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        xs = [p[0] for p in data["dist_vs_i"]]
        ys = [p[1] for p in data["dist_vs_i"]]
        ax.scatter(xs, ys, s=12, alpha=0.5, color="#d65f5f")
        top = max(xs) if xs else 1
        ax.plot([0, top], [1, 2 * top + 1], "k--", lw=1,
                label="2 i + 1")
        ax.set_xlabel("intersection number")
        ax.set_ylabel("graph distance")
        ax.legend()
        fig.tight_layout()
        fig.savefig(os.path.join(figdir, "distance_bound.png"), dpi=150)
        plt.close(fig)

    if data.get("level_set_sizes"):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        pts = sorted(data["level_set_sizes"])
        ax.plot([float(a) for a, _n in pts], [n for _a, n in pts],
                marker="o", color="#6acc64")
        ax.set_xscale("log")
        ax.set_xlabel("scale parameter")
        ax.set_ylabel("level-set size")
        fig.tight_layout()
        fig.savefig(os.path.join(figdir, "level_sets.png"), dpi=150)
        plt.close(fig)

    if data.get("convergence_series"):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        for series in data["convergence_series"]:
            ax.plot(range(len(series)), [s if s is not None else float("nan")
                                         for s in series], alpha=0.7)
        ax.set_xlabel("stage")
        ax.set_ylabel("distance from the starting curve")
        fig.tight_layout()
        fig.savefig(os.path.join(figdir, "convergence.png"), dpi=150)
        plt.close(fig)
