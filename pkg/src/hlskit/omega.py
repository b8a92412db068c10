"""Membership in Ω_m, the index set of the mixed-norm HLS bilinear inequality.

Uses the same scaled-reciprocal coordinates as :mod:`hlskit.gamma`; the
condition ``1/p + 1/q >= 1`` becomes ``a + b >= unit``.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .errors import DomainError, InputError
from .exponents import IndexSpec, common_scale, conjugate, format_rational, hls_exponent
from .gamma import MembershipReport, TraceStep, _exp, gamma_member

__all__ = ["OMEGA_RULES", "omega_member", "omega_via_gamma", "omega_decide_scaled"]

OMEGA_RULES = ("O1", "O2", "O3", "O4", "O5")


def _o1(dims, a, b, U, depth, sub, order):
    m = len(a)
    if not (0 < a[-1] < U and 0 < b[-1] < U):
        return None
    if a[-1] + b[-1] > U:
        return True, None, f"1 < p_{m}, q_{m} < inf and 1/p_{m} + 1/q_{m} > 1"
    return None  # the equality case belongs to O5


def _o2(dims, a, b, U, depth, sub, order):
    m = len(a)
    am, bm = a[-1], b[-1]
    if not (am == U and bm < U):
        return None
    for i1 in range(m - 1, 0, -1):
        k = i1 - 1
        if not (a[k] < U and a[k] + b[k] > U):
            continue
        if not all(a[i] == U or a[i] + b[i] == U for i in range(k + 1, m - 1)):
            continue
        if not all(a[i] + bm >= U for i in range(k, m)):
            continue
        return True, i1, f"p_{m} = 1, q_{m} > 1, witness i_1 = {i1}"
    return False, None, (f"O2: p_{m} = 1 and q_{m} = {_exp(bm, U)} > 1, "
                         "but no index i_1 meets the witness requirements")


def _o3(dims, a, b, U, depth, sub, order):
    m = len(a)
    am, bm = a[-1], b[-1]
    if not (am < U and bm == U):
        return None
    for i2 in range(m - 1, 0, -1):
        k = i2 - 1
        if not (b[k] < U and a[k] + b[k] > U):
            continue
        if not all(b[i] == U or a[i] + b[i] == U for i in range(k + 1, m - 1)):
            continue
        if not all(am + b[i] >= U for i in range(k, m)):
            continue
        return True, i2, f"p_{m} > 1, q_{m} = 1, witness i_2 = {i2}"
    return False, None, (f"O3: p_{m} = {_exp(am, U)} > 1 and q_{m} = 1, "
                         "but no index i_2 meets the witness requirements")


def _o4(dims, a, b, U, depth, sub, order):
    m = len(a)
    if not (a[-1] == U and b[-1] == U):
        return None
    if _decide(dims[:-1], a[:-1], b[:-1], U, depth + 1, sub, order):
        return True, None, f"p_{m} = q_{m} = 1, lower level is a member"
    return False, None, f"O4: p_{m} = q_{m} = 1, but the lower level is not a member"


def _o5(dims, a, b, U, depth, sub, order):
    m = len(a)
    if not (0 < a[-1] < U and 0 < b[-1] < U and a[-1] + b[-1] == U):
        return None
    if _decide(dims[:-1], a[:-1], b[:-1], U, depth + 1, sub, order):
        return True, None, f"1 < p_{m}, q_{m} < inf conjugate, lower level is a member"
    return False, None, (f"O5: p_{m}, q_{m} are conjugate, "
                         "but the lower level is not a member")


_RULES = {"O1": _o1, "O2": _o2, "O3": _o3, "O4": _o4, "O5": _o5}


def _decide(dims, a, b, U, depth, trace, order) -> bool:
    m = len(a)
    if m == 1:
        if 0 < a[0] < U and 0 < b[0] < U and a[0] + b[0] > U:
            if trace is not None:
                trace.append(TraceStep(depth, "BASE", None,
                                       "1 < p_1, q_1 < inf and 1/p_1 + 1/q_1 > 1"))
            return True
        if trace is not None:
            trace.append(TraceStep(depth, "FAIL", None,
                                   "base requires 1 < p_1, q_1 < inf and 1/p_1 + 1/q_1 > 1, got "
                                   f"p_1 = {_exp(a[0], U)}, q_1 = {_exp(b[0], U)}"))
        return False
    for i in range(m):
        if a[i] > U or b[i] > U or a[i] + b[i] < U:
            if trace is not None:
                trace.append(TraceStep(depth, "FAIL", None,
                                       f"requires p_{i + 1}, q_{i + 1} >= 1 and 1/p_{i + 1} + "
                                       f"1/q_{i + 1} >= 1, got p_{i + 1} = {_exp(a[i], U)}, "
                                       f"q_{i + 1} = {_exp(b[i], U)}"))
            return False
    failures = []
    for name in order:
        sub = None if trace is None else []
        res = _RULES[name](dims, a, b, U, depth, sub, order)
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
                                   "matches no condition 1-5"))
    return False


def omega_decide_scaled(dims: Sequence[int], a: Sequence[int], b: Sequence[int], unit: int,
                        order: Sequence[str] = OMEGA_RULES,
                        trace: Optional[list] = None) -> bool:
    return _decide(tuple(dims), tuple(a), tuple(b), unit, 0, trace, tuple(order))


def omega_member(spec: IndexSpec, *, order: Sequence[str] = OMEGA_RULES) -> MembershipReport:
    """Decide ``(p, q) in Ω_m``; any ``lam`` on ``spec`` is ignored."""
    for name in order:
        if name not in _RULES:
            raise InputError(f"unknown rule {name!r}")
    ra = [x.reciprocal for x in spec.p]
    rb = [x.reciprocal for x in spec.q]
    unit = common_scale(ra + rb)
    a = [int(x * unit) for x in ra]
    b = [int(x * unit) for x in rb]
    trace: list[TraceStep] = []
    member = omega_decide_scaled(spec.dims, a, b, unit, order, trace)
    return MembershipReport(member, trace, "omega", spec)


def omega_via_gamma(spec: IndexSpec) -> MembershipReport:
    """Ω membership through Γ: test ``(p, q')`` at the HLS kernel order.

    Returns the Γ report, tagged with the order used under ``extra``.
    """
    if any(x.reciprocal > 1 for x in spec.p + spec.q):
        raise DomainError("omega_via_gamma needs every exponent >= 1")
    lam = hls_exponent(spec)
    dual = IndexSpec(spec.dims, spec.p, tuple(conjugate(x) for x in spec.q), lam)
    report = gamma_member(dual)
    report.extra["hls_lambda"] = format_rational(lam)
    report.extra["via"] = "gamma"
    return report


def _hls_lambda_scaled(dims, a, b, U) -> int:
    return sum(n * (2 * U - x - y) for n, x, y in zip(dims, a, b))
