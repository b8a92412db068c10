"""Exact membership test for the recursive index set Γ_{λ,m}.

All comparisons run on reciprocals scaled by a common integer ``unit``:
``a_i = unit/p_i``, ``b_i = unit/q_i`` and ``lam = unit*λ``.  In these
coordinates ``p = inf`` is ``a = 0``, ``p = 1`` is ``a = unit`` and
``p <= q`` is ``a >= b``, so every condition is an integer comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import InputError, PreconditionError
from .exponents import IndexSpec, common_scale, format_rational, homogeneity_defect

__all__ = [
    "TraceStep",
    "MembershipReport",
    "GAMMA_RULES",
    "gamma_member",
    "riesz_bounded",
    "scale_spec",
    "decide_scaled",
]

GAMMA_RULES = ("T1", "T2", "T3", "T4", "T5")


@dataclass(frozen=True)
class TraceStep:
    depth: int
    rule: str
    witness: Optional[int] = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {"depth": self.depth, "rule": self.rule,
                "witness": self.witness, "reason": self.reason}


@dataclass
class MembershipReport:
    """Verdict plus the rule trace that produced it.

    ``trace`` is ordered by recursion depth.  For members, every depth has
    exactly one step naming the rule that fired.  For non-members the steps
    are ``FAIL`` records; the deepest one carries the root cause.
    """

    member: bool
    trace: list[TraceStep]
    namespace: str = "gamma"
    spec: Optional[IndexSpec] = None
    homogeneity_defect: Optional[Fraction] = None
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.member

    @property
    def rules(self) -> list[str]:
        return [s.rule for s in self.trace]

    @property
    def witnesses(self) -> list[Optional[int]]:
        return [s.witness for s in self.trace]

    @property
    def reason(self) -> str:
        fails = [s for s in self.trace if s.rule == "FAIL"]
        if fails:
            return fails[-1].reason
        return self.trace[-1].reason if self.trace else ""

    def to_dict(self) -> dict:
        out = {
            "namespace": self.namespace,
            "member": self.member,
            "rules": self.rules,
            "witnesses": self.witnesses,
            "reason": self.reason,
            "trace": [s.to_dict() for s in self.trace],
        }
        if self.spec is not None:
            out["spec"] = self.spec.to_dict()
        if self.homogeneity_defect is not None:
            out["homogeneity_defect"] = format_rational(self.homogeneity_defect)
        out.update(self.extra)
        return out


def scale_spec(spec: IndexSpec, lam: Optional[Fraction] = None):
    """Integer coordinates ``(a, b, lam, unit)`` for ``spec``."""
    lam = spec.lam if lam is None else lam
    if lam is None:
        raise InputError("lambda is required")
    ra = [x.reciprocal for x in spec.p]
    rb = [x.reciprocal for x in spec.q]
    unit = common_scale(ra + rb + [lam])
    a = tuple(int(x * unit) for x in ra)
    b = tuple(int(x * unit) for x in rb)
    return a, b, int(lam * unit), unit


def _fmt(x: int, unit: int) -> str:
    return format_rational(Fraction(x, unit))


def _exp(x: int, unit: int) -> str:
    """Text of the exponent whose scaled reciprocal is ``x``."""
    return "inf" if x == 0 else format_rational(Fraction(unit, x))


# Each rule returns (ok, witness, reason); ``None`` means the rule's pattern on
# (p_m, q_m) does not match, so it is not a candidate at all.

def _t1(dims, a, b, lam, U, depth, sub, order):
    m = len(a)
    am, bm = a[-1], b[-1]
    if not (0 < bm < am < U):
        return None
    return True, None, f"1 < p_{m} < q_{m} < inf"


def _t2(dims, a, b, lam, U, depth, sub, order):
    m = len(a)
    am, bm = a[-1], b[-1]
    if not (am == U and bm > 0):
        return None
    for i1 in range(m - 1, 0, -1):
        k = i1 - 1
        if not (a[k] < U and b[k] < a[k]):
            continue
        if not all(a[i] == U or a[i] == b[i] for i in range(k + 1, m - 1)):
            continue
        if not all(bm <= a[i] for i in range(k, m)):
            continue
        return True, i1, f"p_{m} = 1, q_{m} < inf, witness i_1 = {i1}"
    return False, None, (f"T2: p_{m} = 1 and q_{m} = {_exp(bm, U)} < inf, "
                         "but no index i_1 meets the witness requirements")


def _t3(dims, a, b, lam, U, depth, sub, order):
    m = len(a)
    am, bm = a[-1], b[-1]
    if not (am < U and bm == 0):
        return None
    for i2 in range(m - 1, 0, -1):
        k = i2 - 1
        if not (0 < b[k] < a[k]):
            continue
        if not all(b[i] == 0 or b[i] == a[i] for i in range(k + 1, m - 1)):
            continue
        if not all(am >= b[i] for i in range(k, m)):
            continue
        return True, i2, f"p_{m} > 1, q_{m} = inf, witness i_2 = {i2}"
    return False, None, (f"T3: p_{m} = {_exp(am, U)} > 1 and q_{m} = inf, "
                         "but no index i_2 meets the witness requirements")


def _t4(dims, a, b, lam, U, depth, sub, order):
    m = len(a)
    if not (a[-1] == U and b[-1] == 0):
        return None
    ok = _decide(dims[:-1], a[:-1], b[:-1], lam, U, depth + 1, sub, order)
    if ok:
        return True, None, f"p_{m} = 1, q_{m} = inf, lower level is a member"
    return False, None, f"T4: p_{m} = 1, q_{m} = inf, but the lower level is not a member"


def _t5(dims, a, b, lam, U, depth, sub, order):
    m = len(a)
    if not (0 < a[-1] == b[-1] < U):
        return None
    lower = lam - dims[-1] * U
    ok = _decide(dims[:-1], a[:-1], b[:-1], lower, U, depth + 1, sub, order)
    if ok:
        return True, None, f"1 < p_{m} = q_{m} < inf, lower level at lambda = {_fmt(lower, U)}"
    return False, None, (f"T5: 1 < p_{m} = q_{m} < inf, but the lower level at "
                         f"lambda = {_fmt(lower, U)} is not a member")


_RULES: dict[str, Callable] = {"T1": _t1, "T2": _t2, "T3": _t3, "T4": _t4, "T5": _t5}


def _decide(dims, a, b, lam, U, depth, trace, order) -> bool:
    m = len(a)
    N = sum(dims)
    defect = sum(n * x for n, x in zip(dims, a)) - sum(n * x for n, x in zip(dims, b)) - (N * U - lam)
    if defect != 0:
        if trace is not None:
            trace.append(TraceStep(depth, "FAIL", None,
                                   f"homogeneity fails at m = {m}: defect {_fmt(defect, U)}"))
        return False
    for i in range(m):
        if a[i] > U or b[i] > a[i]:
            if trace is not None:
                trace.append(TraceStep(depth, "FAIL", None,
                                       f"requires 1 <= p_{i + 1} <= q_{i + 1} <= inf, got "
                                       f"p_{i + 1} = {_exp(a[i], U)}, q_{i + 1} = {_exp(b[i], U)}"))
            return False
    if m == 1:
        if 0 < b[0] < a[0] < U:
            if trace is not None:
                trace.append(TraceStep(depth, "BASE", None, "1 < p_1 < q_1 < inf"))
            return True
        if trace is not None:
            trace.append(TraceStep(depth, "FAIL", None,
                                   f"base requires 1 < p_1 < q_1 < inf, got p_1 = "
                                   f"{_exp(a[0], U)}, q_1 = {_exp(b[0], U)}"))
        return False

    failures = []
    for name in order:
        sub = None if trace is None else []
        res = _RULES[name](dims, a, b, lam, U, depth, sub, order)
        if res is None:
            continue
        ok, witness, reason = res
        if ok:
            if trace is not None:
                trace.append(TraceStep(depth, name, witness, reason))
                trace.extend(sub)
            return True
        failures.append((reason, sub))
    if trace is not None:
        if failures:
            trace.append(TraceStep(depth, "FAIL", None, "; ".join(r for r, _ in failures)))
            for _, sub in failures:
                trace.extend(sub)
        else:
            trace.append(TraceStep(depth, "FAIL", None,
                                   f"(p_{m}, q_{m}) = ({_exp(a[-1], U)}, {_exp(b[-1], U)}) "
                                   "matches no rule T1-T5"))
    return False


def decide_scaled(dims: Sequence[int], a: Sequence[int], b: Sequence[int], lam: int,
                  unit: int, order: Sequence[str] = GAMMA_RULES,
                  trace: Optional[list] = None) -> bool:
    """Γ membership on integer-scaled reciprocals; the fast path for lattice scans."""
    return _decide(tuple(dims), tuple(a), tuple(b), lam, unit, 0, trace, tuple(order))


def gamma_member(spec: IndexSpec, *, order: Sequence[str] = GAMMA_RULES) -> MembershipReport:
    """Decide whether ``(p, q)`` lies in Γ_{λ,m}.

    Levels are checked as: homogeneity, then ``1 <= p_i <= q_i <= inf``, then
    the rules in ``order`` (default T1..T5).  The rules are tried in that order
    and the first one that holds is recorded.  For T2/T3 the largest witness
    index is reported.
    """
    for name in order:
        if name not in _RULES:
            raise InputError(f"unknown rule {name!r}")
    a, b, lam, unit = scale_spec(spec)
    trace: list[TraceStep] = []
    member = decide_scaled(spec.dims, a, b, lam, unit, order, trace)
    return MembershipReport(member, trace, "gamma", spec, homogeneity_defect(spec))


def riesz_bounded(spec: IndexSpec) -> MembershipReport:
    """Boundedness of I_λ from L^p to L^q, valid for ``0 < λ < N_m``."""
    if spec.lam is None:
        raise InputError("lambda is required")
    if not (0 < spec.lam < spec.total_dim):
        raise PreconditionError(
            f"order outside (0, N_m): lambda = {format_rational(spec.lam)}, N_m = {spec.total_dim}"
        )
    return gamma_member(spec)
