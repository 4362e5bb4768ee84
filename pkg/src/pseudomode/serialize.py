"""Deterministic CSV/JSON/gnuplot emission.

Data files never contain timestamps or environment details, and every float
is printed through one shared %.17g formatter, so identical inputs give
byte-identical outputs.  Complex values appear as two columns (re, im) in CSV
and as [re, im] pairs in JSON.
"""

import json

import numpy as np


def fmt(v):
    """One float, shortest round-trippable form."""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if np.isnan(v):
        return "nan"
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.17g}"


def write_csv(path, header, rows):
    """Rows of scalars; complex entries must be pre-split by the caller."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _finite(v):
    # strict JSON has no NaN/Infinity tokens; use the same names as fmt()
    if np.isnan(v):
        return "nan"
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _jsonable(obj):
    if isinstance(obj, complex) or isinstance(obj, np.complexfloating):
        return [_finite(float(obj.real)), _finite(float(obj.imag))]
    if isinstance(obj, float) or isinstance(obj, np.floating):
        return _finite(float(obj))
    if isinstance(obj, (np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [_jsonable(complex(v)) for v in obj.ravel()] \
                if obj.ndim == 1 else [_jsonable(r) for r in obj]
        return obj.tolist()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def mode_to_csv(path, mode):
    """Samples x, f, f' of a pseudomode (complex split into re/im)."""
    rows = zip(mode.x, mode.f.real, mode.f.imag, mode.fp.real, mode.fp.imag)
    return write_csv(path, ["x", "re_f", "im_f", "re_fp", "im_fp"], rows)


def frame_to_json(path, F):
    obj = {
        "x": F.x,
        "weights": F.weights,
        "lam": F.lam,
        "E": [[_jsonable(complex(v)) for v in col] for col in F.E.T],
        "provenance": [
            {"kind": k, "u": u, "xi": None if xi is None else complex(xi),
             "h": h, "n": n}
            for (k, u, xi, h, n) in F.provenance],
    }
    return write_json(path, obj)


def frame_from_json(path):
    from .frame import FrameMatrix
    with open(path) as fh:
        d = json.load(fh)
    cols = np.array([[complex(re, im) for re, im in col] for col in d["E"]])
    lam = np.array([complex(re, im) for re, im in d["lam"]])
    prov = [(p["kind"], p["u"],
             None if p["xi"] is None else complex(p["xi"][0], p["xi"][1]),
             p["h"], p["n"]) for p in d["provenance"]]
    return FrameMatrix(E=cols.T, lam=lam, x=np.array(d["x"]),
                       weights=np.array(d["weights"]), provenance=prov)


def report_to_csv(path, rows):
    """Bound-check rows (t, lhs, bound, ratio) as emitted by the frame module."""
    out = [(r["t"], r["lhs"], r["bound"], r["ratio"]) for r in rows]
    return write_csv(path, ["t", "lhs", "bound", "ratio"], out)


def resolvent_to_csv(path, z_re, z_im, smin, ok=None):
    rows = []
    for i, zr in enumerate(z_re):
        for j, zi in enumerate(z_im):
            row = [zr, zi, smin[i, j]]
            if ok is not None:
                row.append(bool(ok[i, j]))
            rows.append(row)
    header = ["re_z", "im_z", "s_min"] + (["converged"] if ok is not None else [])
    return write_csv(path, header, rows)


def gnuplot_contour(path, csv_path, title, extra_files=()):
    """Contour script over a resolvent CSV; overlays are extra (re, im) CSVs."""
    lines = [
        "set datafile separator ','",
        f"set title '{title}'",
        "set xlabel 're z'",
        "set ylabel 'im z'",
        "set view map",
        "set contour base",
        "set cntrparam levels auto 12",
        "unset surface",
        "set logscale z",
        f"splot '{csv_path}' skip 1 using 1:2:3 with lines notitle",
    ]
    for extra in extra_files:
        lines.append(
            f"replot '{extra}' skip 1 using 1:2:(1) with points pt 7 ps 0.3 notitle")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
