"""CSV/JSON writers and emitted plot scripts.

Everything written here is deterministic: floats use 17 significant digits,
JSON keys are sorted and the metadata carries a version string instead of a
timestamp, so rerunning a command reproduces its files byte for byte.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import __version__


def fmt(x) -> str:
    return format(float(x), ".17g")


def _clean(obj):
    """Make metadata JSON-safe: numpy scalars to Python, complex to [re, im], nan to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if not math.isfinite(float(obj)) else float(obj)
    return obj


def metadata(meta: dict, **extra) -> dict:
    return _clean({**meta, **extra, "version": f"driven_jcm {__version__}"})


def csv_text(header: list[str], columns: list[np.ndarray]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def write_table(path: Path, header: list[str], columns: list[np.ndarray], meta: dict,
                fmt_name: str = "csv") -> list[Path]:
    """Write a table plus its metadata; returns the files written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = metadata(meta, columns=header)
    if fmt_name == "csv":
        data = path.with_suffix(".csv")
        side = path.with_suffix(".json")
        data.write_text(csv_text(header, columns), newline="")
        side.write_text(json_text(meta))
        return [data, side]
    if fmt_name == "json":
        data = path.with_suffix(".json")
        payload = {"meta": meta, "data": {h: np.asarray(c).tolist() for h, c in zip(header, columns)}}
        data.write_text(json_text(payload))
        return [data]
    raise ValueError(f"unknown format {fmt_name!r}")


_PLOT_SERIES = '''import csv
import matplotlib.pyplot as plt

rows = list(csv.reader(open({csv!r})))
x = [float(r[0]) for r in rows[1:]]
y = [float(r[1]) for r in rows[1:]]
plt.plot(x, y, lw=0.8)
plt.xlabel({xlabel!r})
plt.ylabel({ylabel!r})
plt.title({title!r})
plt.savefig({png!r}, dpi=150)
'''

_PLOT_SURFACE = '''import csv
import numpy as np
import matplotlib.pyplot as plt

rows = np.array([[float(v) for v in r] for r in list(csv.reader(open({csv!r})))[1:]])
nq, npts = {n_q}, {n_p}
q = rows[:, 0].reshape(nq, npts)
p = rows[:, 1].reshape(nq, npts)
w = rows[:, 2].reshape(nq, npts)
ax = plt.figure().add_subplot(projection="3d")
ax.plot_surface(p, q, w, cmap="viridis", linewidth=0)
ax.set_xlabel("p")
ax.set_ylabel("q")
ax.set_zlabel("W")
ax.set_title({title!r})
plt.savefig({png!r}, dpi=150)
'''


def write_plot_script(path: Path, kind: str, title: str, **kw) -> Path:
    """Emit a standalone matplotlib script that reads the CSV next to it."""
    path = Path(path)
    csv_name = path.with_suffix(".csv").name
    png = path.with_suffix(".png").name
    script = path.with_name(path.stem + "_plot.py")
    if kind == "series":
        text = _PLOT_SERIES.format(csv=csv_name, png=png, title=title,
                                   xlabel=kw.get("xlabel", "x"), ylabel=kw.get("ylabel", "y"))
    elif kind == "surface":
        text = _PLOT_SURFACE.format(csv=csv_name, png=png, title=title, n_q=kw["n_q"], n_p=kw["n_p"])
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    script.write_text(text)
    return script
