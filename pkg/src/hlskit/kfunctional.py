"""K-functionals of the couple (L^u, L^v) on nonnegative simple functions.

A split ``f = c f + (1 - c) f`` with one coefficient ``c_j`` per level set is
searched for the smallest ``||c f||_u + t ||(1 - c) f||_v``.  Which solver runs
depends on the couple:

* ``u == v >= 1``: closed form ``min(1, t) ||f||_u``.
* ``v = inf`` or ``u = 1`` (with ``v >= 1``): the optimal ``L^v`` part is the
  truncation ``min(f, s)``, so only the level ``s`` is searched.  ``u = inf`` or
  ``v = 1`` is the mirror case with ``min(f, s)`` in ``L^u``.
* other ``u, v >= 1``: convex and smooth in ``c``; L-BFGS-B from ``c = 1/2``
  with the exact gradient.
* an exponent below 1: grid search per piece refined by coordinate descent
  with golden-section line searches.
  This yields an upper bound only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, InputError
from .exponents import Exponent

__all__ = [
    "SimpleFunction",
    "Couple",
    "k_functional",
    "k_curve",
    "theta_norm",
    "lorentz_norm",
    "k_growth_check",
    "rearrangement_integral",
    "parse_simple_function",
    "format_simple_function",
    "interpolation_exponent",
]

_GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SimpleFunction:
    """Nonnegative simple function as ``(value, measure)`` pieces.

    Canonical form: values strictly decreasing, equal values merged.
    """

    values: tuple[float, ...]
    measures: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.measures):
            raise InputError("values and measures must have equal length")
        if not self.values:
            raise InputError("a simple function needs at least one piece")
        merged: dict[float, float] = {}
        for v, mu in zip(self.values, self.measures):
            v, mu = float(v), float(mu)
            if not (v > 0 and math.isfinite(v)):
                raise InputError(f"piece values must be positive and finite, got {v}")
            if not (mu > 0 and math.isfinite(mu)):
                raise InputError(f"piece measures must be positive and finite, got {mu}")
            merged[v] = merged.get(v, 0.0) + mu
        keys = sorted(merged, reverse=True)
        object.__setattr__(self, "values", tuple(keys))
        object.__setattr__(self, "measures", tuple(merged[k] for k in keys))

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[float, float]]) -> "SimpleFunction":
        pieces = list(pieces)
        return cls(tuple(p[0] for p in pieces), tuple(p[1] for p in pieces))

    @classmethod
    def indicator(cls, measure: float, value: float = 1.0) -> "SimpleFunction":
        return cls((value,), (measure,))

    @property
    def pieces(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.measures))

    @property
    def total_measure(self) -> float:
        return float(sum(self.measures))

    def scaled(self, c: float) -> "SimpleFunction":
        return SimpleFunction(tuple(c * v for v in self.values), self.measures)

    def truncated(self, level: float) -> "SimpleFunction":
        """``min(f, level)``."""
        if level <= 0:
            raise InputError("truncation level must be positive")
        return SimpleFunction(tuple(min(v, level) for v in self.values), self.measures)

    def norm(self, u) -> float:
        return _lp(np.array(self.values), np.array(self.measures), _float_exp(u))

    def rearrangement(self, s) -> np.ndarray:
        """Decreasing rearrangement ``f*`` evaluated at ``s``."""
        s = np.asarray(s, dtype=float)
        edges = np.cumsum(self.measures)
        idx = np.searchsorted(edges, s, side="right")
        vals = np.append(np.array(self.values), 0.0)
        return vals[np.minimum(idx, len(self.values))]


def parse_simple_function(text: str) -> SimpleFunction:
    """Lines ``value,measure``; blank lines and ``#`` comments are skipped."""
    pieces = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [t.strip() for t in line.split(",")]
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected 'value,measure', got {line!r}")
        try:
            pieces.append((float(Fraction(parts[0])), float(Fraction(parts[1]))))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"line {lineno}: malformed number in {line!r}") from None
    return SimpleFunction.from_pieces(pieces)


def format_simple_function(f: SimpleFunction) -> str:
    return "".join(f"{v!r},{mu!r}\n" for v, mu in f.pieces)


@dataclass(frozen=True)
class Couple:
    u: Exponent
    v: Exponent

    def __post_init__(self):
        object.__setattr__(self, "u", Exponent.of(self.u))
        object.__setattr__(self, "v", Exponent.of(self.v))

    def __str__(self) -> str:
        return f"(L^{self.u}, L^{self.v})"


def _float_exp(u) -> float:
    e = Exponent.of(u) if not isinstance(u, Exponent) else u
    return float(e)


def _lp(vals: np.ndarray, mus: np.ndarray, u: float) -> float:
    if math.isinf(u):
        nz = vals[vals > 0]
        return float(nz.max()) if nz.size else 0.0
    return float(np.sum(vals ** u * mus) ** (1.0 / u))


def _objective(c, vals, mus, u, v, t) -> float:
    c = np.clip(c, 0.0, 1.0)
    return _lp(c * vals, mus, u) + t * _lp((1.0 - c) * vals, mus, v)


def _objective_grad(c, vals, mus, u, v, t):
    c = np.clip(c, 0.0, 1.0)
    w0, w1 = c * vals, (1.0 - c) * vals
    A, B = _lp(w0, mus, u), _lp(w1, mus, v)
    g = np.zeros_like(c)
    if A > 0:
        g += A ** (1.0 - u) * w0 ** (u - 1.0) * vals * mus
    if B > 0:
        g -= t * B ** (1.0 - v) * w1 ** (v - 1.0) * vals * mus
    return A + t * B, g


def _golden(fun, lo: float, hi: float, tol: float = 1e-12, maxiter: int = 200):
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fun(x2)
    cands = [(fun(lo), lo), (fun(hi), hi), (f1, x1), (f2, x2)]
    best = min(cands)
    return best[1], best[0]


def _coordinate_descent(c, vals, mus, u, v, t, sweeps: int = 200, rtol: float = 1e-9):
    c = np.array(c, dtype=float)
    cur = _objective(c, vals, mus, u, v, t)
    for _ in range(sweeps):
        prev = cur
        for j in range(c.size):
            def along(x, j=j):
                trial = c.copy()
                trial[j] = x
                return _objective(trial, vals, mus, u, v, t)
            x, val = _golden(along, 0.0, 1.0)
            if val < cur:
                c[j], cur = x, val
        if prev - cur <= rtol * max(abs(cur), 1e-300):
            break
    return c, cur


def _truncation_value(vals, mus, u, v, t, low_to: str) -> float:
    """Minimize over the truncation level ``s``.

    ``low_to="v"``: ``f = (f - s)_+ + min(f, s)`` with the bounded part in L^v.
    ``low_to="u"``: bounded part in L^u.  Between consecutive piece values the
    objective is convex when ``u, v >= 1`` and linear when the exponents are
    ``{1, inf}``; in the linear case the breakpoints alone are exact.
    """
    a_exp, b_exp, wa, wb = (u, v, 1.0, t) if low_to == "v" else (v, u, t, 1.0)

    def phi(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))[:, None]
        high = np.maximum(vals[None, :] - s, 0.0)
        low = np.minimum(vals[None, :], s)
        return wa * _lp_rows(high, mus, a_exp) + wb * _lp_rows(low, mus, b_exp)

    breaks = np.concatenate([[0.0], np.sort(vals)])
    best = float(phi(breaks).min())
    if a_exp == 1 and math.isinf(b_exp):
        return best
    lo, hi = breaks[:-1].copy(), breaks[1:].copy()
    if not (u >= 1 and v >= 1):
        # not convex: coarse scan to bracket the minimum on every interval
        frac = np.linspace(0.0, 1.0, 65)
        pts = lo[:, None] + frac[None, :] * (hi - lo)[:, None]
        vals_g = phi(pts.ravel()).reshape(pts.shape)
        k = vals_g.argmin(axis=1)
        rows = np.arange(lo.size)
        best = min(best, float(vals_g.min()))
        lo, hi = pts[rows, np.maximum(k - 1, 0)], pts[rows, np.minimum(k + 1, 64)]
    # golden-section on all intervals at once
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = phi(x1), phi(x2)
    for _ in range(80):
        if np.all(hi - lo <= 1e-13 * np.maximum(hi, 1e-300)):
            break
        left = f1 <= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        nx1 = np.where(left, hi - _GOLDEN * (hi - lo), x2)
        nx2 = np.where(left, x1, lo + _GOLDEN * (hi - lo))
        nf1 = np.where(left, np.nan, f2)
        nf2 = np.where(left, f1, np.nan)
        x1, x2 = nx1, nx2
        need1, need2 = np.isnan(nf1), np.isnan(nf2)
        if need1.any():
            nf1[need1] = phi(x1[need1])
        if need2.any():
            nf2[need2] = phi(x2[need2])
        f1, f2 = nf1, nf2
    return float(min(best, f1.min(), f2.min()))


def _lp_rows(rows: np.ndarray, mus: np.ndarray, u: float) -> np.ndarray:
    if math.isinf(u):
        return rows.max(axis=1)
    return np.sum(rows ** u * mus[None, :], axis=1) ** (1.0 / u)


def k_functional(f: SimpleFunction, t: float, couple: Union[Couple, Sequence]) -> float:
    """``K(t, f; L^u, L^v) = inf ||f0||_u + t ||f1||_v`` over splits of ``f``."""
    if not isinstance(couple, Couple):
        couple = Couple(*couple)
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise InputError(f"t must be positive and finite, got {t}")
    u, v = float(couple.u), float(couple.v)
    vals = np.array(f.values)
    mus = np.array(f.measures)

    if u == v and u >= 1:
        return min(1.0, t) * _lp(vals, mus, u)
    if math.isinf(v) or (u == 1 and v >= 1):
        return _truncation_value(vals, mus, u, v, t, "v")
    if math.isinf(u) or (v == 1 and u >= 1):
        return _truncation_value(vals, mus, u, v, t, "u")

    J = vals.size
    if u >= 1 and v >= 1:
        res = minimize(_objective_grad, np.full(J, 0.5), args=(vals, mus, u, v, t),
                       jac=True, method="L-BFGS-B", bounds=[(0.0, 1.0)] * J,
                       options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 2000})
        val = _objective(res.x, vals, mus, u, v, t)
        return float(min(val, _lp(vals, mus, u), t * _lp(vals, mus, v)))
    else:
        grid = np.linspace(0.0, 1.0, 51)
        start = np.full(J, 0.5)
        for j in range(J):
            trial = np.repeat(start[None, :], grid.size, axis=0)
            trial[:, j] = grid
            scores = [_objective(row, vals, mus, u, v, t) for row in trial]
            start[j] = grid[int(np.argmin(scores))]
    _, val = _coordinate_descent(start, vals, mus, u, v, t)
    # the trivial splits are always admissible
    return float(min(val, _lp(vals, mus, u), t * _lp(vals, mus, v)))


def k_curve(f: SimpleFunction, ts: Sequence[float], couple) -> np.ndarray:
    return np.array([k_functional(f, t, couple) for t in ts])


def rearrangement_integral(f: SimpleFunction, t: float) -> float:
    """``int_0^t f*(s) ds``, the closed form of K for the couple (L^1, L^inf)."""
    remaining = float(t)
    total = 0.0
    for v, mu in f.pieces:
        take = min(mu, remaining)
        total += v * take
        remaining -= take
        if remaining <= 0:
            break
    return total


def theta_norm(f: SimpleFunction, couple, theta, q, *, rtol: float = 1e-8,
               start: int = 40, max_n: int = 400, sat_tol: float = 1e-12) -> float:
    """Dyadic real-interpolation norm ``|| 2^(-n theta) K(2^n, f) ||_{l^q(Z)}``.

    Terms are computed outward from ``n = 0``.  ``K`` is concave with
    ``K(0) = 0`` and bounded by ``min(||f||_u, t ||f||_v)``.  So once
    ``K(2^n) = ||f||_u`` (or ``2^n ||f||_v`` on the left) every later term on
    that side is known exactly, and its geometric tail is summed in closed
    form.  Otherwise a side stops when the tail bound from the same two
    inequalities drops below ``rtol`` times the partial norm (at least
    ``start`` terms) or at ``max_n``.
    """
    if not isinstance(couple, Couple):
        couple = Couple(*couple)
    theta = float(Fraction(theta)) if isinstance(theta, (str, Fraction)) else float(theta)
    if not 0 < theta < 1:
        raise InputError(f"theta must lie in (0, 1), got {theta}")
    qf = _float_exp(q)
    nu, nv = f.norm(couple.u), f.norm(couple.v)

    def term(n):
        return 2.0 ** (-n * theta) * k_functional(f, 2.0 ** n, couple)

    def combine(parts):
        if math.isinf(qf):
            return max(parts)
        return sum(x ** qf for x in parts) ** (1 / qf)

    terms = [term(0)]
    tails = []
    for side in (+1, -1):
        n = 0
        while True:
            n += side
            t = 2.0 ** n
            k = k_functional(f, t, couple)
            terms.append(2.0 ** (-n * theta) * k)
            sat = nu if side > 0 else t * nv
            rate = theta if side > 0 else 1 - theta
            first = 2.0 ** (-(abs(n) + 1) * rate) * (nu if side > 0 else nv)
            if k >= sat * (1 - sat_tol):
                exact = True
            else:
                exact = False
                if abs(n) >= start:
                    partial = combine(terms)
                    bound = first if math.isinf(qf) else first / (1 - 2.0 ** (-rate * qf)) ** (1 / qf)
                    if (bound <= partial) if math.isinf(qf) else (bound <= rtol * partial):
                        break
            if exact:
                # remaining terms: first * 2^(-rate * j), j = 0, 1, ...
                if math.isinf(qf):
                    tails.append(first)
                else:
                    tails.append(first ** qf / (1 - 2.0 ** (-rate * qf)))
                break
            if abs(n) >= max_n:
                break
    if math.isinf(qf):
        return float(max(terms + tails))
    return float((sum(x ** qf for x in terms) + sum(tails)) ** (1 / qf))


def interpolation_exponent(u, v, theta) -> Fraction:
    """``1/p_theta = (1 - theta)/u + theta/v``, returned as ``p_theta``'s reciprocal."""
    theta = Fraction(theta)
    return (1 - theta) * Exponent.of(u).reciprocal + theta * Exponent.of(v).reciprocal


def lorentz_norm(f: SimpleFunction, p, q) -> float:
    """``(int_0^inf (s^(1/p) f*(s))^q ds/s)^(1/q)``, exact on the step function ``f*``."""
    pe = Exponent.of(p) if not isinstance(p, Exponent) else p
    if pe.is_infinite:
        raise DomainError("lorentz_norm is not implemented for p = inf")
    pf, qf = float(pe), _float_exp(q)
    edges = np.concatenate([[0.0], np.cumsum(f.measures)])
    vals = np.array(f.values)
    if math.isinf(qf):
        return float(np.max(vals * edges[1:] ** (1 / pf)))
    r = qf / pf
    total = np.sum(vals ** qf * (edges[1:] ** r - edges[:-1] ** r)) / r
    return float(total ** (1 / qf))


def k_growth_check(f: SimpleFunction, couple, s: float, t: float, slack: float = 1e-9) -> bool:
    """``K(t) <= max(1, t/s) K(s)`` up to a relative ``slack``."""
    if s <= 0 or t <= 0:
        raise InputError("s and t must be positive")
    ks = k_functional(f, s, couple)
    kt = k_functional(f, t, couple)
    bound = max(1.0, t / s) * ks
    return kt <= bound + slack * max(bound, 1.0)
