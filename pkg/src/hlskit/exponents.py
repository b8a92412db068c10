"""Exact extended-rational exponents and index specifications.

An :class:`Exponent` is a value in ``(0, inf]`` stored through its reciprocal,
so that ``inf`` is the ordinary rational ``0`` and conjugation is ``1 - r``.
Nothing in this module ever touches floating point.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Optional, Sequence, Union

from .errors import DomainError, InputError

__all__ = [
    "Exponent",
    "INF",
    "IndexSpec",
    "parse_exponent",
    "parse_rational",
    "parse_exponent_list",
    "format_rational",
    "conjugate",
    "homogeneity_defect",
    "hls_exponent",
]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_INF_TOKENS = {"inf", "infinity", "∞"}

ExponentLike = Union["Exponent", int, Fraction, str, float]


def parse_rational(token: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"7"`` or ``"-3/4"`` into an exact :class:`Fraction`."""
    if isinstance(token, Fraction):
        return token
    if isinstance(token, int) and not isinstance(token, bool):
        return Fraction(token)
    if not isinstance(token, str):
        raise InputError(f"cannot read {token!r} as an exact rational")
    m = _RATIONAL_RE.match(token)
    if m is None:
        raise InputError(f"malformed rational token {token!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InputError(f"zero denominator in {token!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    """Lossless text form: ``"3"`` or ``"3/4"``."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@total_ordering
@dataclass(frozen=True)
class Exponent:
    """A positive rational or infinity, stored as its exact reciprocal.

    ``Exponent(Fraction(1, 2))`` is *not* the exponent 1/2; use
    :meth:`of` / :func:`parse_exponent` to build from a value.
    """

    reciprocal: Fraction

    def __post_init__(self):
        r = self.reciprocal
        if not isinstance(r, Fraction):
            object.__setattr__(self, "reciprocal", Fraction(r))
            r = self.reciprocal
        if r < 0:
            raise DomainError("exponents must be positive")

    @classmethod
    def of(cls, value: ExponentLike) -> "Exponent":
        if isinstance(value, Exponent):
            return value
        if isinstance(value, str):
            return parse_exponent(value)
        if isinstance(value, float):
            if math.isinf(value) and value > 0:
                return INF
            raise InputError(
                f"floating-point exponent {value!r} refused; use an exact rational or 'inf'"
            )
        v = parse_rational(value)
        if v <= 0:
            raise DomainError(f"exponent must be positive, got {format_rational(v)}")
        return cls(1 / v)

    @classmethod
    def from_reciprocal(cls, r: Union[Fraction, int, str]) -> "Exponent":
        return cls(parse_rational(r))

    @property
    def is_infinite(self) -> bool:
        return self.reciprocal == 0

    @property
    def value(self) -> Union[Fraction, float]:
        """Exact value, or ``math.inf``."""
        return math.inf if self.is_infinite else 1 / self.reciprocal

    def __float__(self) -> float:
        return math.inf if self.is_infinite else float(1 / self.reciprocal)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else format_rational(1 / self.reciprocal)

    def __repr__(self) -> str:
        return f"Exponent({self})"

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.reciprocal > other.reciprocal

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.reciprocal == other.reciprocal

    def __hash__(self):
        return hash(("Exponent", self.reciprocal))


def _coerce(other):
    if isinstance(other, Exponent):
        return other
    try:
        return Exponent.of(other)
    except (InputError, TypeError):
        return NotImplemented


INF = Exponent(Fraction(0))


def parse_exponent(token: Union[str, int, Fraction, Exponent]) -> Exponent:
    """Read an exponent from ``"3"``, ``"3/2"`` or ``"inf"``."""
    if isinstance(token, str) and token.strip().lower() in _INF_TOKENS:
        return INF
    if isinstance(token, (Exponent, float)):
        return Exponent.of(token)
    try:
        v = parse_rational(token)
    except InputError:
        raise InputError(f"malformed exponent token {token!r}") from None
    if v <= 0:
        raise DomainError(f"exponent must be positive, got {token!r}")
    return Exponent(1 / v)


def parse_exponent_list(text: str) -> tuple[Exponent, ...]:
    """Comma-separated exponent tokens, e.g. ``"2,inf,3/2"``."""
    tokens = [t for t in text.split(",")]
    if not tokens or any(not t.strip() for t in tokens):
        raise InputError(f"empty token in exponent list {text!r}")
    return tuple(parse_exponent(t) for t in tokens)


def conjugate(p: ExponentLike) -> Exponent:
    """Hölder conjugate: ``1/p + 1/p' = 1``, with ``1' = inf`` and ``inf' = 1``."""
    p = Exponent.of(p)
    if p.reciprocal > 1:
        raise DomainError("conjugate undefined below 1")
    return Exponent(1 - p.reciprocal)


def _as_lambda(lam) -> Optional[Fraction]:
    if lam is None:
        return None
    if isinstance(lam, Exponent):
        if lam.is_infinite:
            raise DomainError("order lambda must be finite")
        return 1 / lam.reciprocal
    if isinstance(lam, float):
        raise InputError("floating-point lambda refused; use an exact rational")
    return parse_rational(lam)


@dataclass(frozen=True)
class IndexSpec:
    """Block dimensions, exponent vectors ``p`` and ``q``, and an optional order.

    ``lam`` is kept as a plain :class:`Fraction` since recursive steps of the
    decider evaluate orders that can reach zero or go negative.
    """

    dims: tuple[int, ...]
    p: tuple[Exponent, ...]
    q: tuple[Exponent, ...]
    lam: Optional[Fraction] = field(default=None)

    def __post_init__(self):
        try:
            dims = tuple(int(n) for n in self.dims)
        except (TypeError, ValueError):
            raise InputError(f"dimensions must be integers, got {self.dims!r}") from None
        if not dims:
            raise InputError("need at least one block (m >= 1)")
        if any(n <= 0 for n in dims):
            raise InputError(f"block dimensions must be positive, got {dims}")
        p = tuple(Exponent.of(x) for x in self.p)
        q = tuple(Exponent.of(x) for x in self.q)
        if not (len(p) == len(q) == len(dims)):
            raise InputError(
                f"length mismatch: dims={len(dims)}, p={len(p)}, q={len(q)}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "lam", _as_lambda(self.lam))

    @classmethod
    def parse(cls, dims: str, p: str, q: str, lam: Optional[str] = None) -> "IndexSpec":
        """Build from the comma-separated textual form used by the CLI."""
        try:
            d = tuple(int(t) for t in dims.split(","))
        except ValueError:
            raise InputError(f"malformed dimension list {dims!r}") from None
        return cls(d, parse_exponent_list(p), parse_exponent_list(q),
                   None if lam is None else parse_rational(lam))

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        """``N_m``, the sum of block dimensions."""
        return sum(self.dims)

    def with_lambda(self, lam) -> "IndexSpec":
        return IndexSpec(self.dims, self.p, self.q, lam)

    def dual(self) -> "IndexSpec":
        """``(q', p', lam)``: the index pair of the adjoint operator."""
        return IndexSpec(self.dims, tuple(conjugate(x) for x in self.q),
                         tuple(conjugate(x) for x in self.p), self.lam)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "p": [str(x) for x in self.p],
            "q": [str(x) for x in self.q],
            "lambda": None if self.lam is None else format_rational(self.lam),
        }

    def __str__(self) -> str:
        lam = "" if self.lam is None else f", lambda={format_rational(self.lam)}"
        return (f"dims=({','.join(map(str, self.dims))}), "
                f"p=({','.join(map(str, self.p))}), q=({','.join(map(str, self.q))}){lam}")


def homogeneity_defect(spec: IndexSpec) -> Fraction:
    """``sum n_i/p_i - sum n_i/q_i - (N_m - lam)``; zero iff the scaling balance holds."""
    if spec.lam is None:
        raise InputError("homogeneity defect needs lambda")
    lhs = sum((n * p.reciprocal for n, p in zip(spec.dims, spec.p)), Fraction(0))
    rhs = sum((n * q.reciprocal for n, q in zip(spec.dims, spec.q)), Fraction(0))
    return lhs - rhs - (spec.total_dim - spec.lam)


def hls_exponent(spec: IndexSpec) -> Fraction:
    """Kernel power ``sum n_i (1/p_i' + 1/q_i')`` of the bilinear inequality."""
    total = Fraction(0)
    for n, p, q in zip(spec.dims, spec.p, spec.q):
        total += n * (conjugate(p).reciprocal + conjugate(q).reciprocal)
    return total


def reciprocals(exps: Iterable[Exponent]) -> tuple[Fraction, ...]:
    return tuple(e.reciprocal for e in exps)


def common_scale(values: Sequence[Fraction]) -> int:
    """Least common denominator of a collection of rationals."""
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d
