"""Output-size experiments over tangent-bundle scenes.

Measures how the visible-portion complexity grows with n and k: portion
and endpoint counts for 2D line scenes, total face vertex counts for 3D
plane scenes.  Scenes are lines (planes) tangent to a common circle
(sphere) around the query, so every element contributes to the visible
set and growth in n is structural rather than a sampling accident.
Rows are produced in a fixed order and scenes depend only on
(seed, n, trial), so runs are reproducible; runtime_ms is the one
nondeterministic column.
"""

from __future__ import annotations

import csv
import io
import time
from typing import Optional, Sequence

from .generate import tangent_lines, tangent_planes
from .vis2d import endpoint_count, kvis_lines, portion_count
from .vis3d import face_complexity, vis_planes

FIELDS = ("dim", "n", "k", "trial", "portion_count", "endpoint_count",
          "face_complexity", "runtime_ms")


def _scene_seed(base: int, trial: int) -> int:
    return base * 10007 + trial


def run_experiment(dim: int, n_list: Sequence[int], k_list: Sequence[int],
                   trials: int, seed: int) -> list[dict]:
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    rows = []
    for n in n_list:
        for trial in range(trials):
            sseed = _scene_seed(seed, trial)
            if dim == 2:
                lines, query = tangent_lines(sseed, n)
                for k in k_list:
                    t0 = time.perf_counter()
                    portions = kvis_lines(lines, query, k)
                    ms = (time.perf_counter() - t0) * 1000.0
                    rows.append({"dim": 2, "n": n, "k": k, "trial": trial,
                                 "portion_count": portion_count(portions),
                                 "endpoint_count": endpoint_count(portions),
                                 "face_complexity": "",
                                 "runtime_ms": f"{ms:.3f}"})
            else:
                planes, query = tangent_planes(sseed, n)
                for k in k_list:
                    t0 = time.perf_counter()
                    faces = vis_planes(planes, query, k)
                    ms = (time.perf_counter() - t0) * 1000.0
                    rows.append({"dim": 3, "n": n, "k": k, "trial": trial,
                                 "portion_count": len(faces),
                                 "endpoint_count": "",
                                 "face_complexity": face_complexity(faces),
                                 "runtime_ms": f"{ms:.3f}"})
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _median(vals: list) -> float:
    vs = sorted(vals)
    m = len(vs) // 2
    if len(vs) % 2:
        return float(vs[m])
    return (vs[m - 1] + vs[m]) / 2.0


def size_medians(rows: Sequence[dict], field: str) -> dict:
    """Median of `field` grouped by (n, k), skipping blank cells."""
    groups: dict = {}
    for row in rows:
        v = row[field]
        if v == "":
            continue
        groups.setdefault((int(row["n"]), int(row["k"])), []).append(int(v))
    return {key: _median(vals) for key, vals in groups.items()}


def make_figure(rows: Sequence[dict], path: str) -> None:
    """Log-log growth plot of the size medians, one series per k."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    dims = {int(r["dim"]) for r in rows}
    fig, axes = plt.subplots(1, len(dims), figsize=(6 * len(dims), 4.5),
                             squeeze=False)
    for ax, dim in zip(axes[0], sorted(dims)):
        field = "endpoint_count" if dim == 2 else "face_complexity"
        med = size_medians([r for r in rows if int(r["dim"]) == dim], field)
        ks = sorted({k for (_, k) in med})
        for k in ks:
            ns = sorted(n for (n, kk) in med if kk == k)
            ax.plot(ns, [max(med[(n, k)], 1) for n in ns],
                    marker="o", label=f"k={k}")
        if ks:
            ns = sorted({n for (n, _) in med})
            ref = [n * (ks[-1] + 1) ** (dim - 1) for n in ns]
            ax.plot(ns, ref, linestyle="--", color="gray",
                    label=f"n(k+1)^{dim - 1} ref")
        ax.set_xscale("log", base=2)
        ax.set_yscale("log", base=2)
        ax.set_xlabel("n")
        ax.set_ylabel(field)
        ax.set_title(f"dim {dim}")
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
