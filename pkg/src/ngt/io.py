"""CSV/JSON readers and writers for fields, density matrices, trajectories and reports.

Floats are written with 17 significant digits so every file round-trips
bit-for-bit. Writes go through a temporary file that is renamed into place.
"""
from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path
from typing import Union

import numpy as np

from .density import DensityMatrix
from .grid import ComplexField, GridSpec, RealField
from .residual import ResidualReport
from .schrodinger import EvolutionConfig, Potential, Trajectory

PathLike = Union[str, os.PathLike]


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def atomic_write_text(path: PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: PathLike, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_field_csv(path: PathLike, f: Union[ComplexField, RealField]) -> None:
    x = f.grid.x
    if isinstance(f, ComplexField):
        lines = ["x,re,im"] + [f"{_fmt(xi)},{_fmt(v.real)},{_fmt(v.imag)}" for xi, v in zip(x, f.values)]
    else:
        lines = ["x,value"] + [f"{_fmt(xi)},{_fmt(v)}" for xi, v in zip(x, f.values)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_field_csv(path: PathLike, grid: GridSpec) -> Union[ComplexField, RealField]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    if header == ["x", "re", "im"]:
        return ComplexField(grid, body[:, 1] + 1j * body[:, 2])
    if header == ["x", "value"]:
        return RealField(grid, body[:, 1])
    raise ValueError(f"unrecognised field CSV header {header}")


def write_density(path: PathLike, rho: DensityMatrix, threshold: float = 0.0) -> Path:
    """Sparse ``i,j,re,im`` CSV of entries with |rho_ij| > threshold plus a JSON sidecar.

    Returns the sidecar path (``<path>.json``).
    """
    path = Path(path)
    v = rho.values
    ii, jj = np.nonzero(np.abs(v) > threshold)
    lines = [f"# threshold={_fmt(threshold)}", "i,j,re,im"]
    lines += [f"{i},{j},{_fmt(v[i, j].real)},{_fmt(v[i, j].imag)}" for i, j in zip(ii, jj)]
    atomic_write_text(path, "\n".join(lines) + "\n")
    masked = [] if rho.mask is None else [[int(i), int(j)] for i, j in zip(*np.nonzero(rho.mask))]
    sidecar = path.with_name(path.name + ".json")
    write_json(sidecar, {"grid": rho.grid.to_dict(), "threshold": threshold, "mask": masked})
    return sidecar


def read_density(path: PathLike) -> DensityMatrix:
    path = Path(path)
    meta = json.loads(path.with_name(path.name + ".json").read_text(encoding="utf-8"))
    grid = GridSpec.from_dict(meta["grid"])
    v = np.zeros((grid.n_points, grid.n_points), dtype=complex)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    for i, j, re, im in rows[1:]:
        v[int(i), int(j)] = float(re) + 1j * float(im)
    mask = None
    if meta["mask"]:
        mask = np.zeros(v.shape, dtype=bool)
        idx = np.array(meta["mask"])
        mask[idx[:, 0], idx[:, 1]] = True
    return DensityMatrix(grid, v, mask)


def write_trajectory(directory: PathLike, traj: Trajectory, V: Potential, cfg: EvolutionConfig) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = []
    for k, state in enumerate(traj.states):
        name = f"state_{k:06d}.csv"
        write_field_csv(directory / name, state)
        files.append(name)
    write_json(directory / "manifest.json", {
        "dt": cfg.dt, "steps": cfg.steps, "grid": traj.grid.to_dict(),
        "potential": V.to_dict(), "constants": cfg.constants.to_dict(),
        "times": [float(t) for t in traj.times], "files": files,
    })


def read_trajectory(directory: PathLike) -> Trajectory:
    directory = Path(directory)
    meta = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    grid = GridSpec.from_dict(meta["grid"])
    psi = np.array([read_field_csv(directory / f, grid).values for f in meta["files"]])
    return Trajectory(grid, np.array(meta["times"]), psi)


def write_residual(json_path: PathLike, csv_path: PathLike, report: ResidualReport) -> None:
    write_json(json_path, report.to_dict())
    lines = ["t,residual_l2,field_l2,relative"]
    lines += [f"{_fmt(t)},{_fmt(r)},{_fmt(f)},{_fmt(q)}"
              for t, r, f, q in zip(report.times, report.residual_l2, report.field_l2, report.relative)]
    atomic_write_text(csv_path, "\n".join(lines) + "\n")
