"""Default verification suites shared by the CLI, the tests and the demos.

Each suite returns a :class:`SuiteResult` with one row per case.  The
parameters below are the desk-scale defaults; every function takes keyword
overrides for quicker or heavier runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .consistency import (ConsistencyReport, check_duality, check_known_regions,
                          check_m1_closed_form, check_omega_gamma, default_lattices,
                          lattice_label)
from .errors import InputError
from .exponents import IndexSpec, format_rational, homogeneity_defect
from .grid import Axis, TestFunctionSpec
from .kfunctional import (Couple, SimpleFunction, interpolation_exponent, k_functional,
                          lorentz_norm, rearrangement_integral, theta_norm)
from .riesz import LAMBDA_EQUALS_N, blowup_probe, dilation_check, drift_estimate

__all__ = [
    "SuiteResult",
    "SUITES",
    "run_suite",
    "duality_suite",
    "omega_gamma_suite",
    "regions_suite",
    "dilation_suite",
    "drift_suite",
    "blowup_suite",
    "kfun_oracle_suite",
    "bracket_suite",
    "random_family",
    "DILATION_FUNCTIONS",
    "DRIFT_CASES",
    "BRACKET_CASES",
]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    rows: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "rows": self.rows, "notes": self.notes}

    def table(self) -> str:
        """Plain-text table of the rows (floats to 12 significant digits)."""
        if not self.rows:
            return ""
        cols = list(dict.fromkeys(k for r in self.rows for k in r))
        cells = [[_fmt(r.get(c, "")) for c in cols] for r in self.rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
        return "\n".join(lines)

    def summary(self) -> str:
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'} ({len(self.rows)} cases)"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


# -- lattice suites -------------------------------------------------------------

def _lattice_suite(name: str, fn: Callable[..., ConsistencyReport], ms) -> SuiteResult:
    rows = []
    ok = True
    for lattice in default_lattices(ms):
        rep = fn(lattice)
        ok &= rep.passed
        rows.append({"lattice": lattice_label(lattice), "checks": rep.checks_run,
                     "skipped_flagged": rep.skipped_flagged, "failures": len(rep.failures)})
    return SuiteResult(name, ok, rows)


def duality_suite(ms: Sequence[int] = (1, 2, 3)) -> SuiteResult:
    return _lattice_suite("duality", check_duality, ms)


def omega_gamma_suite(ms: Sequence[int] = (1, 2, 3)) -> SuiteResult:
    return _lattice_suite("omega-gamma", check_omega_gamma, ms)


def regions_suite() -> SuiteResult:
    rows = []
    for rep in (check_m1_closed_form(), check_known_regions()):
        rows.append({"check": rep.check, "checks": rep.checks_run,
                     "skipped_flagged": rep.skipped_flagged, "failures": len(rep.failures)})
    return SuiteResult("regions", all(r["failures"] == 0 for r in rows), rows)


# -- numerical suites -----------------------------------------------------------

DILATION_FUNCTIONS = {
    "box": TestFunctionSpec("box", {"lo": -0.5, "hi": 0.5}),
    "gaussian": TestFunctionSpec("gaussian_product", {"centers": 0.0, "widths": 0.5}),
    "power_tail": TestFunctionSpec("power_tail", {"alpha": 1.5, "axis": 0}),
}


def dilation_suite(*, m: int = 2, cells: int = 128, lams=("1/2", "3/4", "3/2"),
                   a_values=(0.5, 2.0, 4.0), tol: float = 1e-8,
                   rule: str = "midpoint") -> SuiteResult:
    axes = [Axis(-2.0, 2.0, cells)] * m
    rows = []
    for fname, fspec in DILATION_FUNCTIONS.items():
        for lam in lams:
            for a in a_values:
                err = dilation_check(fspec, Fraction(lam), a, axes=axes, rule=rule)
                rows.append({"function": fname, "lambda": lam, "a": float(a),
                             "max_rel_error": err, "ok": err < tol})
    return SuiteResult("dilation", all(r["ok"] for r in rows), rows,
                       [f"m={m}, {cells} cells/axis, rule={rule}, tolerance {tol:g}"])


DRIFT_CASES = (
    IndexSpec((1,), ("2",), ("4",), "3/4"),
    IndexSpec((1,), ("2",), ("4",), "1/2"),
    IndexSpec((1, 1), ("2", "2"), ("4", "4"), "3/2"),
)


def drift_suite(*, cases: Sequence[IndexSpec] = DRIFT_CASES, cells=None,
                rel_tol: float = 0.05, abs_tol: float = 0.02) -> SuiteResult:
    """Fitted slope of ``log r(a)`` against the homogeneity defect.

    The slope is ``d log r / d log a``; theory says ``-defect``.  Cases are
    judged on magnitudes so the sign convention cannot matter.
    """
    fspec = DILATION_FUNCTIONS["gaussian"]
    rows = []
    for spec in cases:
        n = cells or (256 if spec.m == 1 else 64)
        axes = [Axis(-3.0, 3.0, n)] * spec.m
        res = drift_estimate(fspec, spec, axes=axes)
        defect = float(homogeneity_defect(spec))
        slope = res.fitted_slope
        if defect == 0:
            ok = abs(slope) <= abs_tol
        else:
            ok = abs(abs(slope) - abs(defect)) <= rel_tol * abs(defect)
        rows.append({"spec": str(spec), "defect": format_rational(homogeneity_defect(spec)),
                     "fitted_slope": slope, "expected_slope": -defect if defect else 0.0, "ok": ok})
    return SuiteResult("drift", all(r["ok"] for r in rows), rows,
                       ["slope = d log r / d log a, expected -defect"])


def blowup_suite(*, resolutions=(64, 128, 256, 512), min_increment: float = 0.05,
                 stable_tol: float = 0.02) -> SuiteResult:
    bad = blowup_probe(LAMBDA_EQUALS_N, resolutions)
    stable = blowup_probe(IndexSpec((1,), ("2",), ("4",), "3/4"), resolutions)
    inc = bad.relative_increments()
    grows = bad.is_strictly_increasing(min_increment)
    settles = stable.last_relative_change() <= stable_tol
    rows = []
    for (n, r), d in zip(bad.samples, [None] + list(inc)):
        rows.append({"case": "lambda=1 p=q=2", "cells": int(n), "ratio": r,
                     "rel_increment": "" if d is None else float(d)})
    prev = None
    for n, r in stable.samples:
        rows.append({"case": "lambda=3/4 p=2 q=4", "cells": int(n), "ratio": r,
                     "rel_increment": "" if prev is None else (r - prev) / prev})
        prev = r
    notes = [f"unbounded case strictly increasing with increments >= {min_increment}: {grows}",
             f"bounded case last change {stable.last_relative_change():.3g} <= {stable_tol}: {settles}",
             f"rules: {bad.metadata['rule']} / {stable.metadata['rule']}"]
    return SuiteResult("blowup", grows and settles, rows, notes)


# -- K-functional suites --------------------------------------------------------

def random_family(n: int = 100, *, max_pieces: int = 8, seed: int = 20240611) -> list[SimpleFunction]:
    """Random simple functions: 1..max_pieces pieces, log-normal values and measures."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        J = int(rng.integers(1, max_pieces + 1))
        vals = np.exp(rng.normal(0.0, 1.5, J))
        mus = np.exp(rng.normal(0.0, 1.5, J))
        out.append(SimpleFunction(tuple(vals), tuple(mus)))
    return out


def _t_values(rng, f: SimpleFunction, k: int) -> np.ndarray:
    # straddle the breakpoints of f*: log-uniform around the total measure
    scale = f.total_measure
    return np.sort(scale * np.exp(rng.uniform(-4.0, 4.0, k)))


def kfun_oracle_suite(family: Optional[Sequence[SimpleFunction]] = None, *, t_per_f: int = 10,
                      rtol: float = 1e-6, seed: int = 7,
                      extra_couples=(("2", "4"),)) -> SuiteResult:
    """(L^1, L^inf) against the rearrangement integral, plus concavity and growth.

    Concavity and the ``max(1, t/s)`` growth bound are checked on every couple
    in ``(1, inf)`` and ``extra_couples`` with tolerance ``rtol``.
    """
    family = random_family() if family is None else family
    rng = np.random.default_rng(seed)
    worst_oracle = 0.0
    concave_bad = growth_bad = 0
    couples = [Couple("1", "inf")] + [Couple(*c) for c in extra_couples]
    worst = {str(c): 0.0 for c in couples}
    for f in family:
        ts = _t_values(rng, f, t_per_f)
        for c in couples:
            ks = np.array([k_functional(f, t, c) for t in ts])
            if str(c) == str(couples[0]):
                exact = np.array([rearrangement_integral(f, t) for t in ts])
                worst_oracle = max(worst_oracle, float(np.max(np.abs(ks - exact) / exact)))
            # chord inequality on consecutive triples
            for i in range(len(ts) - 2):
                t1, t2, t3 = ts[i:i + 3]
                w = (t3 - t2) / (t3 - t1)
                chord = w * ks[i] + (1 - w) * ks[i + 2]
                if ks[i + 1] < chord - rtol * chord:
                    concave_bad += 1
                    worst[str(c)] = max(worst[str(c)], float((chord - ks[i + 1]) / chord))
            for i, s in enumerate(ts):
                for j, t in enumerate(ts):
                    bound = max(1.0, t / s) * ks[i]
                    if ks[j] > bound + rtol * bound:
                        growth_bad += 1
    rows = [
        {"check": "rearrangement oracle (L^1, L^inf)", "worst": worst_oracle,
         "ok": worst_oracle <= rtol},
        {"check": "concavity (chord)", "worst": max(worst.values()), "ok": concave_bad == 0},
        {"check": "growth max(1,t/s)", "worst": float(growth_bad), "ok": growth_bad == 0},
    ]
    return SuiteResult("kfun-oracle", all(r["ok"] for r in rows), rows,
                       [f"{len(family)} functions x {t_per_f} t-values, "
                        f"couples {', '.join(map(str, couples))}"])


BRACKET_CASES = (
    ("1", "inf", "1/2", "2"),
    ("1", "3", "1/3", "1"),
    ("2", "4", "1/2", "inf"),
)


def bracket_suite(family: Optional[Sequence[SimpleFunction]] = None, *,
                  cases=BRACKET_CASES, max_range: float = 50.0) -> SuiteResult:
    """``theta_norm / lorentz_norm`` over the family must stay in ``[c, C]`` with ``C/c <= max_range``."""
    family = random_family() if family is None else family
    rows = []
    for u, v, theta, q in cases:
        p_theta = 1 / interpolation_exponent(u, v, theta)
        ratios = [theta_norm(f, (u, v), theta, q) / lorentz_norm(f, p_theta, q) for f in family]
        lo, hi = min(ratios), max(ratios)
        rows.append({"u": u, "v": v, "theta": theta, "q": q,
                     "p_theta": format_rational(p_theta), "c": lo, "C": hi,
                     "C/c": hi / lo, "ok": hi / lo <= max_range})
    return SuiteResult("kfun-bracket", all(r["ok"] for r in rows), rows)


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "duality": duality_suite,
    "omega-gamma": omega_gamma_suite,
    "regions": regions_suite,
    "dilation": dilation_suite,
    "drift": drift_suite,
    "blowup": blowup_suite,
    "kfun-oracle": lambda: _combine("kfun-oracle", kfun_oracle_suite(), bracket_suite()),
}


def _combine(name: str, *parts: SuiteResult) -> SuiteResult:
    rows, notes = [], []
    for p in parts:
        rows += [{"part": p.name, **r} for r in p.rows]
        notes += p.notes
    return SuiteResult(name, all(p.passed for p in parts), rows, notes)


def run_suite(name: str) -> list[SuiteResult]:
    """Run one suite by name, or all of them for ``"all"``."""
    if name == "all":
        return [fn() for fn in SUITES.values()]
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; expected one of {sorted(SUITES) + ['all']}")
    return [SUITES[name]()]
