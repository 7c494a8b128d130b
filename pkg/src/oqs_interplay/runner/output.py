"""CSV and SVG artifacts of a run."""

from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path

import numpy as np

from ..records import FIELDS, QuantifierRecord, RunOutput

HEADER = ",".join(FIELDS)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(out: RunOutput) -> str:
    lines = []
    for key, value in out.metadata.items():
        v = _fmt(value) if isinstance(value, float) else str(value)
        lines.append(f"# {key} = {v}")
    lines.append(HEADER)
    for rec in out.records:
        lines.append(",".join(_fmt(x) for x in rec.as_tuple()))
    return "\n".join(lines) + "\n"


def write_csv(out: RunOutput, path) -> None:
    _atomic_write(path, csv_text(out).encode("ascii", "backslashreplace"))


def read_csv(path) -> RunOutput:
    metadata = {}
    records = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                metadata[key.strip()] = value.strip()
            elif line == HEADER:
                continue
            elif line:
                records.append(QuantifierRecord(*(float(x) for x in line.split(","))))
    return RunOutput(records, metadata)


_SERIES = {
    "delta": (r"$\delta$", "tab:blue"),
    "entropy": (r"$S$", "tab:red"),
    "sigma": (r"$\Sigma$", "tab:green"),
    "ergotropy": (r"$\mathcal{W}$", "tab:purple"),
}


def _panel(ax, x, out: RunOutput, left: str, right: str, tag: str) -> None:
    twin = ax.twinx()
    handles = []
    for axis, name in ((ax, left), (twin, right)):
        y = out.series(name)
        keep = np.isfinite(y)
        label, color = _SERIES[name]
        (h,) = axis.plot(x[keep], y[keep], color=color, label=label, lw=1.4)
        axis.set_ylabel(label, color=color)
        axis.margins(y=0.08)
        handles.append(h)
    ax.legend(handles=handles, loc="best", frameon=False)
    ax.set_title(f"({tag})", loc="left")


def write_plot(out: RunOutput, path) -> None:
    """Two stacked panels: δ and S on top, Σ and 𝒲 below."""
    if len(out) < 2:
        raise ValueError("a plot needs at least two records")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = out.series("abscissa")
    xlabel = "collision number n" if out.metadata.get("model") == "collision" else "time t"
    with matplotlib.rc_context({"svg.hashsalt": "oqs-interplay", "svg.fonttype": "path"}):
        fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 6.5))
        _panel(top, x, out, "delta", "entropy", "a")
        _panel(bottom, x, out, "sigma", "ergotropy", "b")
        bottom.set_xlabel(xlabel)
        fig.tight_layout()
        buf = io.BytesIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    _atomic_write(path, buf.getvalue())
