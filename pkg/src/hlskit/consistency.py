"""Brute-force lattice sweeps that cross-check the deciders.

A lattice is given by the set of values allowed for every reciprocal
``1/p_i`` and ``1/q_i`` (``0`` encodes ``inf``).  Checks run on integer-scaled
coordinates (see :mod:`hlskit.gamma`) and only convert failing points back to
:class:`~hlskit.exponents.IndexSpec` for reporting.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .errors import InputError
from .exponents import (Exponent, IndexSpec, common_scale, format_rational, parse_exponent,
                        parse_rational)
from .gamma import GAMMA_RULES, decide_scaled
from .omega import OMEGA_RULES, _hls_lambda_scaled, omega_decide_scaled

__all__ = [
    "DEFAULT_GRID",
    "LatticeSpec",
    "LatticePoint",
    "ConsistencyReport",
    "default_lattices",
    "enumerate_lattice",
    "check_duality",
    "check_omega_gamma",
    "check_known_regions",
    "check_m1_closed_form",
    "check_rule_order",
    "prop11_predicate",
    "scan_rows",
    "parse_fix",
]

DEFAULT_GRID = tuple(Fraction(x) for x in
                     ("0", "1/6", "1/4", "1/3", "1/2", "2/3", "3/4", "5/6", "1"))

SOLVE = "solve-from-homogeneity"


@dataclass(frozen=True)
class LatticeSpec:
    dims: tuple[int, ...]
    reciprocal_grid: tuple[Fraction, ...] = DEFAULT_GRID
    lambda_rule: Union[str, tuple[Fraction, ...]] = SOLVE

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims or any(n <= 0 for n in dims):
            raise InputError(f"invalid dimension vector {self.dims!r}")
        grid = tuple(sorted(set(parse_rational(x) if not isinstance(x, Fraction) else x
                                for x in self.reciprocal_grid)))
        if not grid:
            raise InputError("empty reciprocal grid")
        if grid[0] < 0 or grid[-1] > 1:
            raise InputError("reciprocal grid values must lie in [0, 1]")
        rule = self.lambda_rule
        if rule != SOLVE:
            rule = tuple(parse_rational(x) for x in rule)
            if not rule:
                raise InputError("explicit lambda list is empty")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "reciprocal_grid", grid)
        object.__setattr__(self, "lambda_rule", rule)

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def unit(self) -> int:
        vals = list(self.reciprocal_grid)
        if self.lambda_rule != SOLVE:
            vals += list(self.lambda_rule)
        u = 1
        for v in vals:
            u = math.lcm(u, v.denominator)
        return u

    @property
    def size(self) -> int:
        n = len(self.reciprocal_grid) ** (2 * self.m)
        return n if self.lambda_rule == SOLVE else n * len(self.lambda_rule)


@dataclass(frozen=True)
class LatticePoint:
    spec: IndexSpec
    flagged: bool  # lambda outside (0, N_m)


def default_lattices(ms: Sequence[int] = (1, 2, 3)) -> list[LatticeSpec]:
    return [LatticeSpec((1,) * m) for m in ms]


def _scaled_points(lattice: LatticeSpec) -> Iterator[tuple[tuple, tuple, int, bool]]:
    """Yield ``(a, b, lam, flagged)`` in deterministic lexicographic order."""
    U = lattice.unit
    dims = lattice.dims
    m = lattice.m
    N = sum(dims)
    vals = [int(x * U) for x in lattice.reciprocal_grid]
    explicit = None if lattice.lambda_rule == SOLVE else [int(x * U) for x in lattice.lambda_rule]
    for combo in itertools.product(vals, repeat=2 * m):
        a, b = combo[:m], combo[m:]
        if explicit is None:
            lam = N * U - sum(n * x for n, x in zip(dims, a)) + sum(n * y for n, y in zip(dims, b))
            yield a, b, lam, not (0 < lam < N * U)
        else:
            for lam in explicit:
                yield a, b, lam, not (0 < lam < N * U)


def _to_spec(dims, a, b, lam, U) -> IndexSpec:
    return IndexSpec(dims, tuple(Exponent(Fraction(x, U)) for x in a),
                     tuple(Exponent(Fraction(y, U)) for y in b),
                     None if lam is None else Fraction(lam, U))


def enumerate_lattice(lattice: LatticeSpec) -> Iterator[LatticePoint]:
    """Every ``(p, q)`` over the grid, ``p`` coordinates varying slowest."""
    U = lattice.unit
    for a, b, lam, flagged in _scaled_points(lattice):
        yield LatticePoint(_to_spec(lattice.dims, a, b, lam, U), flagged)


@dataclass
class ConsistencyReport:
    """Result of one check family.  ``failures`` empty iff everything passed."""

    check: str
    checks_run: int = 0
    skipped_flagged: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "ConsistencyReport") -> "ConsistencyReport":
        return ConsistencyReport(self.check, self.checks_run + other.checks_run,
                                 self.skipped_flagged + other.skipped_flagged,
                                 self.failures + other.failures)

    def to_dict(self) -> dict:
        return {"check": self.check, "checks_run": self.checks_run,
                "skipped_flagged": self.skipped_flagged, "passed": self.passed,
                "failures": self.failures}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def failures_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check_name", "spec", "expected", "got"])
        for f in self.failures:
            w.writerow([f["check_name"], f["spec"], f["expected"], f["got"]])
        return buf.getvalue()

    def summary(self) -> str:
        status = "ok" if self.passed else f"{len(self.failures)} FAILURES"
        return (f"{self.check}: {self.checks_run} checks, "
                f"{self.skipped_flagged} flagged points skipped, {status}")


def _failure(name, dims, a, b, lam, U, expected, got) -> dict:
    return {"check_name": name, "spec": str(_to_spec(dims, a, b, lam, U)),
            "expected": str(expected), "got": str(got)}


def _workers(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("HLSKIT_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _run(worker_fn, lattice: LatticeSpec, name: str, workers: Optional[int]) -> ConsistencyReport:
    """Run ``worker_fn`` on the lattice, optionally split over processes.

    The lattice is partitioned on the first coordinate, and the partial
    reports are merged in partition order, so the result never depends on
    the worker count.
    """
    n = _workers(workers)
    if n == 1:
        return worker_fn(lattice, None)
    parts = range(len(lattice.reciprocal_grid))
    with ProcessPoolExecutor(max_workers=n) as ex:
        reports = list(ex.map(worker_fn, [lattice] * len(parts), parts))
    out = ConsistencyReport(name)
    for r in reports:
        out = out.merge(r)
    return out


def _points(lattice: LatticeSpec, part: Optional[int]):
    if part is None:
        yield from _scaled_points(lattice)
        return
    first = int(lattice.reciprocal_grid[part] * lattice.unit)
    for pt in _scaled_points(lattice):
        if pt[0][0] == first:
            yield pt


def _duality_worker(lattice: LatticeSpec, part: Optional[int]) -> ConsistencyReport:
    U, dims = lattice.unit, lattice.dims
    rep = ConsistencyReport("duality")
    for a, b, lam, flagged in _points(lattice, part):
        if flagged:
            rep.skipped_flagged += 1
            continue
        v = decide_scaled(dims, a, b, lam, U)
        dual_a = tuple(U - y for y in b)
        dual_b = tuple(U - x for x in a)
        w = decide_scaled(dims, dual_a, dual_b, lam, U)
        rep.checks_run += 1
        if v != w:
            rep.failures.append(_failure("duality", dims, a, b, lam, U, v, w))
    return rep


def check_duality(lattice: LatticeSpec, workers: Optional[int] = None) -> ConsistencyReport:
    """Γ verdicts must agree for ``(p, q, λ)`` and ``(q', p', λ)``."""
    return _run(_duality_worker, lattice, "duality", workers)


def _omega_worker(lattice: LatticeSpec, part: Optional[int]) -> ConsistencyReport:
    U, dims = lattice.unit, lattice.dims
    rep = ConsistencyReport("omega-gamma")
    m = lattice.m
    vals = [int(x * U) for x in lattice.reciprocal_grid]
    if part is not None:
        firsts = [vals[part]]
    else:
        firsts = vals
    rest = itertools.product(vals, repeat=2 * m - 1)
    for combo in itertools.product(firsts, list(rest)):
        full = (combo[0],) + combo[1]
        a, b = full[:m], full[m:]
        v = omega_decide_scaled(dims, a, b, U)
        lam = _hls_lambda_scaled(dims, a, b, U)
        w = decide_scaled(dims, a, tuple(U - y for y in b), lam, U)
        rep.checks_run += 1
        if v != w:
            rep.failures.append(_failure("omega-gamma", dims, a, b, None, U, v, w))
    return rep


def check_omega_gamma(lattice: LatticeSpec, workers: Optional[int] = None) -> ConsistencyReport:
    """Ω membership must equal Γ membership of ``(p, q')`` at the HLS order."""
    if lattice.reciprocal_grid[-1] > 1 or lattice.reciprocal_grid[0] < 0:
        raise InputError("omega-gamma check needs exponents >= 1")
    return _run(_omega_worker, lattice, "omega-gamma", workers)


def _classify_m2(a, b, U):
    """Which known m = 2 statements apply to the point, as flags."""
    def open_pq(i):  # 1 < p_i < q_i < inf
        return 0 < b[i] < a[i] < U

    def closed(i):  # 1 <= p_i <= q_i <= inf
        return a[i] <= U and b[i] <= a[i]

    benedek_panzone = open_pq(0) and open_pq(1)
    ab_first = closed(0) and open_pq(1)
    ab_second = open_pq(0) and 0 < a[1] == b[1] < U
    # (i) q_1 = inf and p_2 = q_2
    cex_i = b[0] == 0 and a[1] == b[1]
    # (ii) p_1 <= q_1 < p_2 <= q_2 = inf
    cex_ii = a[0] >= b[0] > a[1] >= b[1] and b[1] == 0
    return benedek_panzone or ab_first or ab_second, cex_i or cex_ii


def check_known_regions(dims: Sequence[int] = (1, 1),
                        grid: Sequence[Fraction] = DEFAULT_GRID) -> ConsistencyReport:
    """Classical m = 2 sufficient regions and counterexamples.

    Sufficient systems (all ``1 < p_i < q_i < inf``; the two Adams-Bagby
    systems) must give members.  Counterexample patterns (i) and (ii) must give
    non-members.  Members with ``1 < p_i < inf`` must have ``p_i <= q_i``.
    """
    lattice = LatticeSpec(tuple(dims), tuple(grid))
    if lattice.m != 2:
        raise InputError("known-region check is stated for m = 2")
    U, dims = lattice.unit, lattice.dims
    rep = ConsistencyReport("regions")
    for a, b, lam, flagged in _scaled_points(lattice):
        if flagged:
            rep.skipped_flagged += 1
            continue
        member = decide_scaled(dims, a, b, lam, U)
        sufficient, counter = _classify_m2(a, b, U)
        rep.checks_run += 1
        if sufficient and not member:
            rep.failures.append(_failure("regions:sufficient", dims, a, b, lam, U, True, member))
        if counter and member:
            rep.failures.append(_failure("regions:counterexample", dims, a, b, lam, U, False, member))
        if member:
            for i in range(2):
                if 0 < a[i] < U and b[i] > a[i]:
                    rep.failures.append(_failure("regions:p<=q", dims, a, b, lam, U,
                                                 f"p_{i + 1} <= q_{i + 1}", "p > q"))
    return rep


def prop11_predicate(n: int, p: Exponent, q: Exponent, lam: Fraction) -> bool:
    """Single-block criterion: ``1 < p < q < inf`` and ``λ = n/p' + n/q``."""
    a, b = p.reciprocal, q.reciprocal
    return 0 < b < a < 1 and lam == n * (1 - a) + n * b


def check_m1_closed_form(n: int = 1, grid: Sequence[Fraction] = DEFAULT_GRID) -> ConsistencyReport:
    """Γ at m = 1 must coincide with the single-block closed-form predicate."""
    from .gamma import gamma_member

    rep = ConsistencyReport("m1-closed-form")
    for point in enumerate_lattice(LatticeSpec((n,), tuple(grid))):
        s = point.spec
        got = gamma_member(s).member
        want = prop11_predicate(n, s.p[0], s.q[0], s.lam)
        rep.checks_run += 1
        if got != want:
            rep.failures.append({"check_name": "m1-closed-form", "spec": str(s),
                                 "expected": str(want), "got": str(got)})
    return rep


def check_rule_order(lattice: LatticeSpec) -> ConsistencyReport:
    """Reversing rule precedence must never change a verdict."""
    U, dims = lattice.unit, lattice.dims
    rep = ConsistencyReport("rule-order")
    rev_g = tuple(reversed(GAMMA_RULES))
    rev_o = tuple(reversed(OMEGA_RULES))
    for a, b, lam, flagged in _scaled_points(lattice):
        g1 = decide_scaled(dims, a, b, lam, U)
        g2 = decide_scaled(dims, a, b, lam, U, rev_g)
        o1 = omega_decide_scaled(dims, a, b, U)
        o2 = omega_decide_scaled(dims, a, b, U, rev_o)
        rep.checks_run += 1
        if g1 != g2 or o1 != o2:
            rep.failures.append(_failure("rule-order", dims, a, b, lam, U,
                                         (g1, o1), (g2, o2)))
    return rep


def lattice_label(lattice: LatticeSpec) -> str:
    return (f"dims={lattice.dims} grid={{{', '.join(format_rational(x) for x in lattice.reciprocal_grid)}}}")


_FIX_RE = re.compile(r"^\s*([pq])(\d+)\s*=\s*(\S+)\s*$")


def parse_fix(assignments: Sequence[str], m: int) -> dict[tuple[str, int], Fraction]:
    """``["q1=inf", "p2=3/2"]`` -> ``{("q", 0): 0, ("p", 1): 2/3}`` (reciprocals)."""
    out: dict[tuple[str, int], Fraction] = {}
    for item in assignments:
        for part in item.split(","):
            if not part.strip():
                continue
            match = _FIX_RE.match(part)
            if not match:
                raise InputError(f"malformed --fix assignment {part!r}; expected e.g. q1=inf")
            name, idx = match.group(1), int(match.group(2))
            if not 1 <= idx <= m:
                raise InputError(f"--fix index {idx} out of range 1..{m} in {part!r}")
            out[(name, idx - 1)] = parse_exponent(match.group(3)).reciprocal
    return out


def scan_rows(dims: Sequence[int], grid: Sequence[Fraction],
              fix: Optional[dict] = None, lam: Optional[Fraction] = None) -> Iterator[dict]:
    """One Γ verdict per lattice point, in the order of :func:`enumerate_lattice`.

    ``fix`` pins single coordinates (keys ``("p", i)`` / ``("q", i)``, values
    reciprocals).  Without ``lam`` the order is solved from homogeneity.
    Row keys: ``p1..pm``, ``q1..qm`` (reciprocals), ``lambda``, ``in_range``,
    ``member``, ``rule``.
    """
    dims = tuple(int(n) for n in dims)
    m = len(dims)
    lattice = LatticeSpec(dims, tuple(grid))
    fix = dict(fix or {})
    values = list(lattice.reciprocal_grid)
    U = common_scale(values + list(fix.values()) + ([] if lam is None else [lam]))
    N = sum(dims)
    axes = []
    for name in ("p", "q"):
        for i in range(m):
            if (name, i) in fix:
                axes.append([int(fix[(name, i)] * U)])
            else:
                axes.append([int(x * U) for x in values])
    for combo in itertools.product(*axes):
        a, b = combo[:m], combo[m:]
        if lam is None:
            lam_s = N * U - sum(n * x for n, x in zip(dims, a)) + sum(n * y for n, y in zip(dims, b))
        else:
            lam_s = int(lam * U)
        trace: list = []
        member = decide_scaled(dims, a, b, lam_s, U, trace=trace)
        row = {f"p{i + 1}": format_rational(Fraction(x, U)) for i, x in enumerate(a)}
        row.update({f"q{i + 1}": format_rational(Fraction(y, U)) for i, y in enumerate(b)})
        row["lambda"] = format_rational(Fraction(lam_s, U))
        row["in_range"] = 0 < lam_s < N * U
        row["member"] = member
        row["rule"] = ">".join(st.rule for st in trace) if member else "FAIL"
        yield row
