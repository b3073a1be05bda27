"""Weight functions on (0,1) and the numerical upper-class characterization.

A weight q is *EFKP upper-class* for a Brownian bridge B when
limsup_{u->0} |B(u)|/q(u) = b < infinity almost surely.  The classical
characterization says this holds iff either of the integrals

    I(q,c) = int_0^1 (x(1-x))^{-1}   exp(-c q^2(x)/(x(1-x))) dx
    E(q,c) = int_0^1 (x(1-x))^{-3/2} q(x) exp(-c q^2(x)/(x(1-x))) dx

is finite for some c > 0 (E additionally needs q(x)/x^{1/2} -> infinity at
both endpoints).  ``integral_I`` / ``integral_E`` evaluate these integrals
over a shrinking endpoint-cutoff schedule and classify the tail behaviour;
``is_efkp_probe`` scans a grid of c values.  Verdicts are numerical
evidence, never certainty, hence the "likely-" vocabulary.

Built-in weight families:

* ``q_efkp_loglog`` -- sqrt(u(1-u) loglog(1/(u(1-u)))), upper-class with
  constant sqrt(2); the recommended parameter-free choice.
* ``q_sdp`` -- sqrt(u(1-u)), the standard-deviation-proportional weight;
  regularly varying, *not* upper-class.
* ``q_chibisov_oreilly`` -- (u(1-u))^{1/2-nu}, upper-class with constant 0.
* ``q_loglog_power`` -- sqrt(u(1-u)) (loglog(1/(u(1-u))))^{1/2+sigma},
  upper-class with constant 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

__all__ = [
    "WeightFunction",
    "IntegralProbe",
    "EfkpProbeResult",
    "q_efkp_loglog",
    "q_sdp",
    "q_chibisov_oreilly",
    "q_loglog_power",
    "efkp_loglog_weight",
    "sdp_weight",
    "chibisov_oreilly_weight",
    "loglog_power_weight",
    "constant_weight",
    "parse_weight",
    "default_epsilon_schedule",
    "integral_I",
    "integral_E",
    "is_efkp_probe",
]


def _check_unit_open(u: np.ndarray) -> None:
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("u must lie strictly inside (0, 1)")


def q_efkp_loglog(u):
    """sqrt(u(1-u) loglog(1/(u(1-u)))).

    The log-log argument 1/(u(1-u)) is >= 4 on (0,1), so the iterated
    logarithm is always defined and positive; this is asserted rather
    than guarded.
    """
    arr = np.asarray(u, dtype=float)
    _check_unit_open(arr)
    p = arr * (1.0 - arr)
    inner = np.log(1.0 / p)
    assert np.all(inner > 1.0)
    out = np.sqrt(p * np.log(inner))
    return float(out) if arr.ndim == 0 else out


def q_sdp(u):
    """Standard-deviation-proportional weight sqrt(u(1-u))."""
    arr = np.asarray(u, dtype=float)
    _check_unit_open(arr)
    out = np.sqrt(arr * (1.0 - arr))
    return float(out) if arr.ndim == 0 else out


def q_chibisov_oreilly(u, nu: float):
    """(u(1-u))^{1/2 - nu} for 0 < nu < 1/2."""
    if not 0.0 < nu < 0.5:
        raise ValueError("nu must lie in (0, 1/2)")
    arr = np.asarray(u, dtype=float)
    _check_unit_open(arr)
    out = (arr * (1.0 - arr)) ** (0.5 - nu)
    return float(out) if arr.ndim == 0 else out


def q_loglog_power(u, sigma: float):
    """sqrt(u(1-u)) (loglog(1/(u(1-u))))^{1/2 + sigma} for sigma > 0."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    arr = np.asarray(u, dtype=float)
    _check_unit_open(arr)
    p = arr * (1.0 - arr)
    out = np.sqrt(p) * np.log(np.log(1.0 / p)) ** (0.5 + sigma)
    return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """An evaluable weight q on (0,1) with shape metadata.

    ``split_point`` is a u* such that q is nondecreasing on (0, u*] and
    nonincreasing on [u*, 1); it is declared metadata (1/2 for every
    built-in family), not inferred.  ``efkp_b`` is the almost-sure
    limsup constant when known, None when the weight is not upper-class.
    """

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    params: Mapping[str, float] = field(default_factory=dict)
    split_point: float = 0.5
    symmetric: bool = True
    efkp_b: float | None = None

    def evaluate(self, u):
        arr = np.asarray(u, dtype=float)
        _check_unit_open(arr)
        out = np.asarray(self.fn(arr), dtype=float)
        return float(out) if arr.ndim == 0 else out

    __call__ = evaluate

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"

    def same_as(self, other: "WeightFunction") -> bool:
        return self.name == other.name and dict(self.params) == dict(other.params)


def efkp_loglog_weight() -> WeightFunction:
    return WeightFunction("efkp-loglog", q_efkp_loglog, efkp_b=math.sqrt(2.0))


def sdp_weight() -> WeightFunction:
    return WeightFunction("sdp", q_sdp, efkp_b=None)


def chibisov_oreilly_weight(nu: float) -> WeightFunction:
    if not 0.0 < nu < 0.5:
        raise ValueError("nu must lie in (0, 1/2)")
    return WeightFunction(
        "chibisov-oreilly", lambda u: q_chibisov_oreilly(u, nu),
        params={"nu": float(nu)}, efkp_b=0.0,
    )


def loglog_power_weight(sigma: float) -> WeightFunction:
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    return WeightFunction(
        "loglog-power", lambda u: q_loglog_power(u, sigma),
        params={"sigma": float(sigma)}, efkp_b=0.0,
    )


def constant_weight() -> WeightFunction:
    """q identically 1; turns the weighted sup into the Kolmogorov-Smirnov sup."""
    return WeightFunction("constant", lambda u: np.ones_like(np.asarray(u, dtype=float)))


def parse_weight(spec: str) -> WeightFunction:
    """Build a weight from a CLI-style string.

    Accepted forms: ``efkp-loglog``, ``sdp``, ``chibisov-oreilly:NU``,
    ``loglog-power:SIGMA``.
    """
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "efkp-loglog":
        return efkp_loglog_weight()
    if name == "sdp":
        return sdp_weight()
    if name == "chibisov-oreilly":
        if not arg:
            raise ValueError("chibisov-oreilly requires a parameter, e.g. chibisov-oreilly:0.25")
        return chibisov_oreilly_weight(float(arg))
    if name == "loglog-power":
        if not arg:
            raise ValueError("loglog-power requires a parameter, e.g. loglog-power:0.5")
        return loglog_power_weight(float(arg))
    raise ValueError(f"unknown weight {spec!r}")


def weight_from_metadata(name: str, params: Mapping[str, float]) -> WeightFunction:
    """Rebuild a built-in weight from serialized (name, params) metadata."""
    if name == "efkp-loglog":
        return efkp_loglog_weight()
    if name == "sdp":
        return sdp_weight()
    if name == "chibisov-oreilly":
        return chibisov_oreilly_weight(float(params["nu"]))
    if name == "loglog-power":
        return loglog_power_weight(float(params["sigma"]))
    if name == "constant":
        return constant_weight()
    raise ValueError(f"unknown weight name {name!r}")


# ---------------------------------------------------------------------------
# Upper-class characterization integrals
# ---------------------------------------------------------------------------

CONVERGED = "converged"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"

LIKELY_EFKP = "likely-EFKP"
LIKELY_NOT_EFKP = "likely-not-EFKP"


@dataclass(frozen=True)
class IntegralProbe:
    """Partial values of a characterization integral along an epsilon schedule.

    ``partial_values[k]`` approximates the integral over
    [schedule[k], 1 - schedule[k]]; the integrand is positive, so the
    sequence is nondecreasing.  ``side_condition`` is None for I(q,c) and
    a bool for E(q,c) (whether q(x)/sqrt(x) grows without bound along the
    schedule, checked at both endpoints).
    """

    c: float
    schedule: tuple[float, ...]
    partial_values: tuple[float, ...]
    verdict: str
    tolerance: float
    side_condition: bool | None = None


@dataclass(frozen=True)
class EfkpProbeResult:
    verdict: str
    probes: Mapping[float, IntegralProbe]


def default_epsilon_schedule() -> tuple[float, ...]:
    """Endpoint cutoffs 10^-k, k = 2..12."""
    return tuple(10.0 ** (-k) for k in range(2, 13))


def _adaptive_simpson(f, a: float, b: float, tol: float, depth: int = 24) -> float:
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, b, fb, m, fm, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (
            recurse(a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
        )

    return recurse(a, fa, b, fb, m, fm, whole, tol, depth)


def _panel_integral(f, lo: float, hi: float, rel_tol: float = 1e-9) -> float:
    """Integrate f over [lo, hi] with log-spaced panels toward both endpoints.

    The integrands vary over many orders of magnitude near 0 and 1, so each
    decade-scale panel is integrated by adaptive Simpson separately.
    """
    mid = 0.5
    edges_left = [lo]
    x = lo
    while x * 10.0 < mid:
        x *= 10.0
        edges_left.append(x)
    edges_left.append(mid)

    edges_right = [1.0 - e for e in edges_left]

    total = 0.0
    for a, b in zip(edges_left[:-1], edges_left[1:]):
        total += _adaptive_simpson(f, a, b, rel_tol * max(abs(total), 1.0) * 1e-3)
    for b, a in zip(edges_right[:-1], edges_right[1:]):
        total += _adaptive_simpson(f, a, b, rel_tol * max(abs(total), 1.0) * 1e-3)
    return total


def _classify(partials: np.ndarray, tol: float) -> str:
    """Tail classification of the partial-integral sequence.

    Fast path: if the last increments are already below ``tol`` relative to
    the running value, the integral has numerically converged.  Otherwise
    the increments along the 10^-k cutoff schedule are fitted as A * k^-p;
    a decay exponent p > 1 means the remaining tail is summable (converged),
    p <= 1 means the partials grow without bound (diverging).  The direct
    tolerance rule alone cannot classify the iterated-logarithm family,
    whose tails shrink only like 1/log(1/eps).
    """
    increments = np.diff(partials)
    scale = max(abs(partials[-1]), 1.0)
    if len(increments) == 0:
        return INCONCLUSIVE
    if np.all(increments[-3:] <= tol * scale):
        return CONVERGED

    last = increments[-4:]
    if np.any(last <= 0.0):
        # Positive integrand: nonpositive increments at this magnitude are
        # numerical noise around a converged value.
        return CONVERGED if np.all(np.abs(last) <= 10 * tol * scale) else INCONCLUSIVE

    # Non-decreasing increments can only come from a divergent tail.
    if np.all(np.diff(last) >= -1e-12 * scale):
        return DIVERGING

    ks = np.arange(len(partials))[1:][-4:].astype(float)
    with np.errstate(divide="ignore"):
        slopes = np.diff(np.log(last)) / np.diff(np.log(ks))
    p_hat = -float(np.median(slopes))
    if p_hat > 1.2:
        return CONVERGED
    if p_hat < 1.05:
        return DIVERGING
    return INCONCLUSIVE


def _probe(
    integrand,
    c: float,
    schedule: Sequence[float] | None,
    tolerance: float,
    side_ratio=None,
) -> IntegralProbe:
    if c <= 0.0:
        raise ValueError("c must be positive")
    sched = tuple(default_epsilon_schedule() if schedule is None else schedule)
    if len(sched) < 5 or np.any(np.diff(sched) >= 0.0) or sched[-1] <= 0.0:
        raise ValueError("schedule must be a strictly decreasing sequence of positive cutoffs")

    partials = []
    running = 0.0
    prev = None
    for eps in sched:
        if prev is None:
            running = _panel_integral(integrand, eps, 1.0 - eps)
        else:
            # Only the two freshly uncovered slivers need integrating.
            running += _panel_integral(integrand, eps, prev)
            running += _panel_integral(integrand, 1.0 - prev, 1.0 - eps)
        if not np.isfinite(running):
            raise FloatingPointError("integrand is not numerically integrable on the interior")
        partials.append(running)
        prev = eps

    arr = np.asarray(partials)
    verdict = _classify(arr, tolerance)

    side = None
    if side_ratio is not None:
        eps_arr = np.asarray(sched)
        r0 = side_ratio(eps_arr)
        r1 = side_ratio(1.0 - eps_arr)
        side = bool(
            r0[-1] > 1.2 * r0[0]
            and r1[-1] > 1.2 * r1[0]
            and np.all(np.diff(r0) > 0.0)
            and np.all(np.diff(r1) > 0.0)
        )

    return IntegralProbe(
        c=float(c),
        schedule=sched,
        partial_values=tuple(float(v) for v in partials),
        verdict=verdict,
        tolerance=float(tolerance),
        side_condition=side,
    )


def integral_I(
    q: WeightFunction,
    c: float,
    schedule: Sequence[float] | None = None,
    tolerance: float = 1e-6,
) -> IntegralProbe:
    """Probe I(q,c) = int (x(1-x))^{-1} exp(-c q^2(x)/(x(1-x))) dx."""

    def integrand(x: float) -> float:
        p = x * (1.0 - x)
        qq = float(q.evaluate(x))
        return math.exp(-c * qq * qq / p) / p

    return _probe(integrand, c, schedule, tolerance)


def integral_E(
    q: WeightFunction,
    c: float,
    schedule: Sequence[float] | None = None,
    tolerance: float = 1e-6,
) -> IntegralProbe:
    """Probe E(q,c) = int (x(1-x))^{-3/2} q(x) exp(-c q^2(x)/(x(1-x))) dx.

    Also reports whether q(x)/sqrt(x) (and the mirrored ratio at 1) grows
    without bound along the schedule, the side condition attached to the
    E-integral characterization.
    """

    def integrand(x: float) -> float:
        p = x * (1.0 - x)
        qq = float(q.evaluate(x))
        return qq * math.exp(-c * qq * qq / p) / p**1.5

    def side_ratio(x: np.ndarray) -> np.ndarray:
        half = np.minimum(x, 1.0 - x)
        return q.evaluate(x) / np.sqrt(half)

    return _probe(integrand, c, schedule, tolerance, side_ratio=side_ratio)


def is_efkp_probe(
    q: WeightFunction,
    c_grid: Sequence[float] = (0.5, 1.0, 2.0, 4.0),
    schedule: Sequence[float] | None = None,
) -> EfkpProbeResult:
    """Scan I(q,c) over a grid of c values.

    likely-EFKP when the integral converges for at least one c;
    likely-not-EFKP when it diverges for every c; inconclusive otherwise.
    The classical criterion requires convergence "for some c > 0", which no
    finite scan can settle, hence the hedged vocabulary.
    """
    if len(c_grid) == 0:
        raise ValueError("c_grid must be nonempty")
    probes = {float(c): integral_I(q, c, schedule=schedule) for c in c_grid}
    verdicts = [p.verdict for p in probes.values()]
    if any(v == CONVERGED for v in verdicts):
        verdict = LIKELY_EFKP
    elif all(v == DIVERGING for v in verdicts):
        verdict = LIKELY_NOT_EFKP
    else:
        verdict = INCONCLUSIVE
    return EfkpProbeResult(verdict=verdict, probes=probes)
