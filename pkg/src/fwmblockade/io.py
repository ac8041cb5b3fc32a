"""CSV / JSON / SVG persistence of sweep results."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional

import numpy as np

from .sweep import SweepConfig, SweepResult

CSV_HEADER = ("axis1", "axis2", "mean_n_a", "g2", "g3", "regime", "converged", "residual")


def _num(x: Optional[float]) -> str:
    return "" if x is None else format(x, ".17g")


def csv_rows(result: SweepResult) -> list[list[str]]:
    rows = []
    for p in result.points:
        obs = p.observables if p.converged else None
        rows.append([
            _num(p.coords[0]),
            _num(p.coords[1]),
            _num(obs.mean_n_a) if obs else "",
            _num(obs.g2) if obs else "",
            _num(obs.g3) if obs else "",
            p.verdict.regime.value if (obs and p.verdict) else "",
            "true" if p.converged else "false",
            _num(obs.residual) if obs else "",
        ])
    return rows


def write_csv(result: SweepResult, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(csv_rows(result))
    return path


def write_json(result: SweepResult, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        json.dump(result.to_dict(), fh, indent=1)
        fh.write("\n")
    return path


def read_json(path: str | Path) -> SweepResult:
    with Path(path).open() as fh:
        return SweepResult.from_dict(json.load(fh))


def write_svg(result: SweepResult, path: str | Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    cfg = result.config
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    g2 = result.values("g2")
    fig, ax = plt.subplots(figsize=(6, 4))
    if cfg.axis2 is None:
        x = result.axis_values()
        ax.plot(x, g2, "-", color="tab:red", label="$g^{(2)}(0)$")
        g3 = result.values("g3")
        if np.any(np.isfinite(g3)) and cfg.name.startswith("fig9"):
            ax.plot(x, g3, "--", color="tab:blue", label="$g^{(3)}(0)$")
        finite = g2[np.isfinite(g2)]
        if finite.size and np.all(finite > 0):
            ax.set_yscale("log")
        ax.set_xlabel(f"{cfg.axis1.param} / kappa")
        ax.set_ylabel("correlation")
        ax2 = ax.twinx()
        ax2.plot(x, result.values("mean_n_a"), ":", color="k", label="$N_a$")
        ax2.set_ylabel("$N_a$")
        ax.legend(loc="upper left")
    else:
        xs, ys = cfg.axis1.values(), cfg.axis2.values()
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.log10(g2)
        mesh = ax.pcolormesh(xs, ys, z.T, shading="nearest")
        fig.colorbar(mesh, ax=ax, label="log10 $g^{(2)}(0)$")
        if cfg.overlay and cfg.overlay.get("kind") == "upb_optimal_E":
            F = cfg.overlay["F_a"]
            gx = xs[xs != 0]
            ax.plot(gx, -2 * F ** 2 / gx, "w--")
            ax.set_ylim(ys.min(), ys.max())
        ax.set_xlabel(f"{cfg.axis1.param} / kappa")
        ax.set_ylabel(f"{cfg.axis2.param} / kappa")
    ax.set_title(cfg.name)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def write_outputs(result: SweepResult, config: Optional[SweepConfig] = None) -> list[Path]:
    """Write whichever of CSV/JSON/SVG the config's outputs name."""
    out = (config or result.config).outputs
    written = []
    try:
        if out.csv:
            written.append(write_csv(result, out.csv))
        if out.json:
            written.append(write_json(result, out.json))
        if out.svg:
            written.append(write_svg(result, out.svg))
    except OSError as exc:
        raise OSError(f"cannot write sweep output: {exc}") from exc
    return written
