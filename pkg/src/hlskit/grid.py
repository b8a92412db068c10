"""Sampled functions on product midpoint grids and iterated mixed norms.

Every variable block has dimension one here; axis ``i`` of the value tensor
is the variable ``x_{i+1}``, and mixed norms reduce axis 0 first.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence, Union

import numpy as np

from .errors import DomainError, InputError
from .exponents import Exponent, parse_exponent

__all__ = [
    "Axis",
    "GridFunction",
    "TestFunctionSpec",
    "KINDS",
    "sample",
    "mixed_norm",
    "staggered",
    "dilated",
    "save_grid",
    "load_grid",
    "slice_csv",
]


@dataclass(frozen=True)
class Axis:
    """Uniform midpoint grid on ``[lo, hi]`` with ``cells`` cells."""

    lo: float
    hi: float
    cells: int

    def __post_init__(self):
        lo, hi, cells = float(self.lo), float(self.hi), int(self.cells)
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise InputError(f"axis needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if cells <= 0:
            raise InputError(f"axis needs a positive cell count, got {self.cells}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "cells", cells)

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / self.cells

    def midpoints(self) -> np.ndarray:
        return self.lo + (np.arange(self.cells) + 0.5) * self.h

    def shifted(self, offset: float) -> "Axis":
        return Axis(self.lo + offset, self.hi + offset, self.cells)

    def scaled(self, a: float) -> "Axis":
        return Axis(a * self.lo, a * self.hi, self.cells)

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "cells": self.cells}


def _axes(axes) -> tuple[Axis, ...]:
    out = []
    for ax in axes:
        if isinstance(ax, Axis):
            out.append(ax)
        elif isinstance(ax, Mapping):
            out.append(Axis(ax["lo"], ax["hi"], ax["cells"]))
        else:
            out.append(Axis(*ax))
    if not out:
        raise InputError("need at least one axis")
    return tuple(out)


class GridFunction:
    """Nonnegative samples on a product of midpoint grids; immutable."""

    __slots__ = ("axes", "values")

    def __init__(self, axes, values):
        axes = _axes(axes)
        vals = np.array(values, dtype=float)
        if vals.shape != tuple(ax.cells for ax in axes):
            raise InputError(
                f"value shape {vals.shape} does not match axes {tuple(ax.cells for ax in axes)}"
            )
        if not np.all(np.isfinite(vals)):
            raise InputError("grid values must be finite")
        if np.any(vals < 0):
            raise InputError("grid values must be nonnegative")
        vals.setflags(write=False)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    @property
    def m(self) -> int:
        return len(self.axes)

    @property
    def cell_volume(self) -> float:
        return float(np.prod([ax.h for ax in self.axes]))

    def midpoints(self) -> list[np.ndarray]:
        return [ax.midpoints() for ax in self.axes]

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.midpoints(), indexing="ij")

    def scaled(self, c: float) -> "GridFunction":
        if c < 0:
            raise InputError("scale factor must be nonnegative")
        return GridFunction(self.axes, c * self.values)

    def __repr__(self) -> str:
        shape = "x".join(str(ax.cells) for ax in self.axes)
        return f"GridFunction({shape}, max={self.values.max():.6g})"


def staggered(axes) -> tuple[Axis, ...]:
    """The same grids shifted by half a cell; output grids for singular kernels."""
    return tuple(ax.shifted(ax.h / 2) for ax in _axes(axes))


def dilated(axes, a: float) -> tuple[Axis, ...]:
    return tuple(ax.scaled(a) for ax in _axes(axes))


# -- test functions ---------------------------------------------------------

@dataclass(frozen=True)
class TestFunctionSpec:
    """Closed-form test function.

    kinds and their parameters:

    ``box``
        ``lo``, ``hi`` (scalar or per axis), ``amplitude`` (default 1).
    ``gaussian_product``
        ``centers``, ``widths`` (scalar or per axis): ``exp(-sum ((x_i-c_i)/w_i)^2)``.
    ``power_tail``
        ``alpha > 0``, ``axis`` (default 0): ``chi(|y_axis| <= 1) / (1 + sum_{i != axis} |y_i|)^alpha``.
    ``log_power``
        ``p`` (exponent or per-axis exponents), ``eps > 0``, ``radius`` in (0, 1):
        ``chi(|y_m| < radius) / ((sum |y_i|)^(sum 1/p_i) * log(1/|y_m|)^((1+eps)/p_m))``.
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown test function kind {self.kind!r}; expected one of {sorted(KINDS)}")
        object.__setattr__(self, "params", dict(self.params))
        KINDS[self.kind][0](self.params)


def _per_axis(value, m, name) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        arr = np.full(m, arr[0])
    if arr.size != m:
        raise InputError(f"parameter {name!r} needs 1 or {m} entries, got {arr.size}")
    return arr


def _check_box(p):
    if "lo" not in p or "hi" not in p:
        raise DomainError("box needs 'lo' and 'hi'")
    if np.any(np.asarray(p["lo"], float) >= np.asarray(p["hi"], float)):
        raise DomainError("box needs lo < hi")
    if float(p.get("amplitude", 1.0)) < 0:
        raise DomainError("box amplitude must be nonnegative")


def _check_gauss(p):
    if np.any(np.asarray(p.get("widths", 1.0), float) <= 0):
        raise DomainError("gaussian widths must be positive")


def _check_power(p):
    if float(p.get("alpha", -1)) <= 0:
        raise DomainError("power_tail needs alpha > 0")
    if int(p.get("axis", 0)) < 0:
        raise DomainError("power_tail axis must be nonnegative")


def _check_log(p):
    if "p" not in p:
        raise DomainError("log_power needs exponent(s) 'p'")
    if float(p.get("eps", 0)) <= 0:
        raise DomainError("log_power needs eps > 0")
    r = float(p.get("radius", 0.5))
    if not 0 < r < 1:
        raise DomainError("log_power needs 0 < radius < 1")


def _eval_box(p, xs):
    m = len(xs)
    lo, hi = _per_axis(p["lo"], m, "lo"), _per_axis(p["hi"], m, "hi")
    inside = np.ones(np.broadcast_shapes(*(x.shape for x in xs)), dtype=bool)
    for i, x in enumerate(xs):
        inside &= (x >= lo[i]) & (x <= hi[i])
    return float(p.get("amplitude", 1.0)) * inside


def _eval_gauss(p, xs):
    m = len(xs)
    c = _per_axis(p.get("centers", 0.0), m, "centers")
    w = _per_axis(p.get("widths", 1.0), m, "widths")
    s = sum(((x - c[i]) / w[i]) ** 2 for i, x in enumerate(xs))
    return np.exp(-s)


def _eval_power(p, xs):
    k = int(p.get("axis", 0))
    if k >= len(xs):
        raise DomainError(f"power_tail axis {k} out of range for m = {len(xs)}")
    alpha = float(p["alpha"])
    rest = sum((np.abs(x) for i, x in enumerate(xs) if i != k), np.zeros_like(xs[k]))
    return (np.abs(xs[k]) <= 1.0) / (1.0 + rest) ** alpha


def _exps(value, m):
    if isinstance(value, (list, tuple)):
        exps = [parse_exponent(v) if not isinstance(v, Exponent) else v for v in value]
    else:
        exps = [value if isinstance(value, Exponent) else parse_exponent(value)]
    if len(exps) == 1:
        exps = exps * m
    if len(exps) != m:
        raise InputError(f"log_power needs 1 or {m} exponents")
    return exps


def _eval_log(p, xs):
    m = len(xs)
    exps = _exps(p["p"], m)
    eps = float(p["eps"])
    radius = float(p.get("radius", 0.5))
    last = np.abs(xs[-1])
    total = sum(np.abs(x) for x in xs)
    if np.any(last == 0) or np.any(total == 0):
        raise DomainError("log_power singular point lies on the grid")
    power = float(sum(e.reciprocal for e in exps))
    log_pow = (1 + eps) * float(exps[-1].reciprocal)
    inside = last < radius
    safe = np.where(inside, last, 0.5)
    return np.where(inside, 1.0 / (total ** power * np.log(1.0 / safe) ** log_pow), 0.0)


KINDS = {
    "box": (_check_box, _eval_box),
    "gaussian_product": (_check_gauss, _eval_gauss),
    "power_tail": (_check_power, _eval_power),
    "log_power": (_check_log, _eval_log),
}


def sample(spec: TestFunctionSpec, axes, scale: float = 1.0) -> GridFunction:
    """Evaluate ``x -> f(x / scale)`` at the cell midpoints of ``axes``.

    ``scale`` samples the dilate ``f_a = f(. / a)`` directly from the closed form.
    """
    axes = _axes(axes)
    if scale <= 0:
        raise InputError("scale must be positive")
    xs = [x / scale for x in np.meshgrid(*[ax.midpoints() for ax in axes], indexing="ij")]
    values = KINDS[spec.kind][1](spec.params, xs)
    return GridFunction(axes, np.asarray(values, dtype=float))


# -- norms --------------------------------------------------------------------

def _exponent_list(p, m) -> list[Exponent]:
    if isinstance(p, (str, int, Fraction, Exponent)):
        p = [p]
    exps = [x if isinstance(x, Exponent) else Exponent.of(x) for x in p]
    if len(exps) != m:
        raise InputError(f"need {m} exponents, got {len(exps)}")
    return exps


def mixed_norm(f: GridFunction, p) -> float:
    """Iterated midpoint-rule norm, innermost over ``x_1`` (axis 0).

    Exponents below 1 are allowed (quasi-norms); ``inf`` takes the slice max.
    """
    exps = _exponent_list(p, f.m)
    cur = np.abs(f.values)
    for ax, e in zip(f.axes, exps):
        if e.is_infinite:
            cur = cur.max(axis=0)
        else:
            pe = float(1 / e.reciprocal)
            cur = np.sum(cur ** pe, axis=0) * ax.h
            cur = cur ** (1.0 / pe)
    return float(cur)


# -- I/O ----------------------------------------------------------------------

_MAGIC = "hlskit-grid 1"


def save_grid(f: GridFunction, path) -> None:
    """Text layout: magic line, JSON axes header, then row-major values."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_MAGIC + "\n")
        fh.write(json.dumps({"axes": [ax.to_dict() for ax in f.axes]}) + "\n")
        for v in f.values.ravel(order="C"):
            fh.write(repr(float(v)) + "\n")


def load_grid(path) -> GridFunction:
    with open(path, encoding="utf-8") as fh:
        magic = fh.readline().strip()
        if magic != _MAGIC:
            raise InputError(f"not an hlskit grid file (header {magic!r})")
        try:
            header = json.loads(fh.readline())
            axes = _axes(header["axes"])
            vals = np.array([float(line) for line in fh if line.strip()])
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"corrupt grid file: {exc}") from None
    shape = tuple(ax.cells for ax in axes)
    if vals.size != int(np.prod(shape)):
        raise InputError(f"grid file has {vals.size} values, axes need {int(np.prod(shape))}")
    return GridFunction(axes, vals.reshape(shape))


def slice_csv(f: GridFunction, fixed: Union[Sequence[int], None] = None) -> str:
    """CSV of a 2-D slice: columns ``x1,x2,value``; other axes fixed at ``fixed``."""
    if f.m < 2:
        raise InputError("slice export needs at least two axes")
    fixed = list(fixed or [])
    if len(fixed) != f.m - 2:
        raise InputError(f"need {f.m - 2} fixed indices for a 2-D slice")
    sl = f.values[(slice(None), slice(None), *fixed)]
    x1, x2 = f.axes[0].midpoints(), f.axes[1].midpoints()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x1", "x2", "value"])
    for i, a in enumerate(x1):
        for j, b in enumerate(x2):
            w.writerow([f"{a:.12g}", f"{b:.12g}", f"{sl[i, j]:.12g}"])
    return buf.getvalue()
