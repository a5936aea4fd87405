"""Closed-form resolutions, optimal interrogation times and the improvement factor.

Resolutions are frequency uncertainties delta_w for a total experiment
duration T; smaller is better.  Ramsey baselines exist for uncorrelated and
maximally correlated environments and for both canonical probes; the
variational closed form interpolates them and is minimized over the
interrogation time either analytically (large n) or numerically by golden
section.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .models import Correlation, DephasingModel, ProbeKind, ProbeState
from .purify import EnvInitState


class UndefinedResolutionError(ValueError):
    """The closed form has no real value at the requested point."""


class FlatFunctionError(RuntimeError):
    """Scalar minimization found no interior descent on the bracket."""


def _require(condition: bool, message: str):
    if not condition:
        raise ValueError(message)


def _exp_or_inf(x: float) -> float:
    """exp(x), saturating to +inf instead of overflowing (x > ~709)."""
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def ramsey_uncorrelated(model: DephasingModel, probe: ProbeKind, total_time: float) -> float:
    """Standard Ramsey resolution at the optimal interrogation time.

    Product probe: sqrt((2 e gamma nu)**(1/nu) / (n T)); the GHZ probe gains
    n**(1 - 1/nu) in the denominator and coincides with it at nu = 1.
    """
    _require(model.correlation is Correlation.UNCORRELATED, "expected an uncorrelated model")
    _require(total_time > 0, "total time must be positive")
    base = (2.0 * math.e * model.gamma * model.nu) ** (1.0 / model.nu)
    if probe is ProbeKind.PRODUCT_PLUS:
        return math.sqrt(base / (model.n * total_time))
    if probe is ProbeKind.GHZ:
        return math.sqrt(base / (model.n ** (2.0 - 1.0 / model.nu) * total_time))
    raise ValueError("Ramsey baselines are defined for the product-plus and GHZ probes")


def ramsey_max_correlated(model: DephasingModel, probe: ProbeKind, t: float, total_time: float) -> float:
    """Ramsey resolution in a shared environment at interrogation time t."""
    _require(model.correlation is Correlation.MAX_CORRELATED, "expected a max-correlated model")
    _require(t > 0 and total_time > 0, "times must be positive")
    n, gamma, nu = model.n, model.gamma, model.nu
    if probe is ProbeKind.GHZ:
        return math.sqrt(_exp_or_inf(2.0 * n**nu * gamma * t**nu) / (n**2 * total_time * t))
    if probe is ProbeKind.PRODUCT_PLUS:
        return math.sqrt(_exp_or_inf(2.0 * gamma * t**nu) / (n * total_time * t))
    raise ValueError("Ramsey baselines are defined for the product-plus and GHZ probes")


def optimal_time_closed(model: DephasingModel, probe: ProbeKind) -> float:
    """Minimizer of the shared-environment Ramsey resolution over t.

    Product probe: (1/(2 gamma nu))**(1/nu).  GHZ probe: the same time
    divided by n, i.e. (1/(2 gamma nu n**nu))**(1/nu), which makes the two
    probes exactly equivalent at their optima for every nu.
    """
    _require(model.correlation is Correlation.MAX_CORRELATED, "expected a max-correlated model")
    _require(model.gamma > 0, "optimal time requires gamma > 0")
    base = (1.0 / (2.0 * model.gamma * model.nu)) ** (1.0 / model.nu)
    if probe is ProbeKind.PRODUCT_PLUS:
        return base
    if probe is ProbeKind.GHZ:
        return base / model.n
    raise ValueError("optimal times are defined for the product-plus and GHZ probes")


@dataclass(frozen=True)
class ResolutionQuery:
    """Inputs of the uncorrelated variational closed form.

    ``q`` is the probe variance ratio Var(sum Z/n)/(1 - <sum Z/n>**2) and
    ``zbar`` the mean <sum Z/n>; both come from the actual probe via
    ``from_probe``.
    """

    model: DephasingModel
    t: float
    total_time: float
    q: float
    zbar: float
    probe: ProbeKind | None = None

    def __post_init__(self):
        _require(self.t > 0, "interrogation time must be positive")
        _require(self.t <= self.total_time, "interrogation time cannot exceed the total duration")
        # tolerate float drift from probe-derived moments at the q = 1 edge
        _require(0.0 < self.q <= 1.0 + 1e-9, "variance ratio q must lie in (0, 1]")
        _require(-1.0 <= self.zbar <= 1.0, "zbar must lie in [-1, 1]")

    @classmethod
    def from_probe(cls, model: DephasingModel, probe: ProbeState, t: float, total_time: float) -> "ResolutionQuery":
        return cls(
            model=model,
            t=t,
            total_time=total_time,
            q=probe.variance_ratio(),
            zbar=probe.mean_z(),
            probe=probe.kind,
        )


def closed_form_uncorrelated(query: ResolutionQuery) -> float:
    """Variational resolution for uncorrelated dephasing at interrogation time t:
    sqrt((1 - zbar**2) (1 + n q (exp(2 gamma t**nu) - 1)) / (q n**2 T t))."""
    model = query.model
    weight = query.q * (1.0 - query.zbar**2)
    if weight <= 0.0:
        raise UndefinedResolutionError("q (1 - zbar**2) must be positive")
    n = model.n
    growth = _exp_or_inf(2.0 * model.gamma * query.t**model.nu) - 1.0
    num = (1.0 - query.zbar**2) * (1.0 + n * query.q * growth)
    den = query.q * n**2 * query.total_time * query.t
    return math.sqrt(num / den)


def optimal_resolution_uncorrelated(model: DephasingModel, n: int, total_time: float) -> float:
    """Large-n closed form for the optimal uncorrelated resolution:
    sqrt((2 gamma nu)**(1/nu) / ((1 - 1/(2 nu))**(1 - 1/nu) n**(2 - 1/nu) T)).

    The verification suite audits this form against the exact numeric
    minimum of the variational expression and reports the gap.
    """
    _require(model.nu >= 1.0, "the large-n closed form is stated for nu >= 1")
    _require(n >= 1 and total_time > 0, "need n >= 1 and T > 0")
    nu, gamma = model.nu, model.gamma
    num = (2.0 * gamma * nu) ** (1.0 / nu)
    den = (1.0 - 1.0 / (2.0 * nu)) ** (1.0 - 1.0 / nu) * n ** (2.0 - 1.0 / nu) * total_time
    return math.sqrt(num / den)


def improvement_closed_form(nu: float) -> float:
    """[e / (1 - 1/(2 nu))**(1 - nu)]**(1/(2 nu)) for nu >= 1;
    sqrt(e) at nu = 1, decreasing toward 1 as nu grows."""
    _require(nu >= 1.0, "closed-form improvement is defined for nu >= 1")
    return (math.e * (1.0 - 1.0 / (2.0 * nu)) ** (nu - 1.0)) ** (1.0 / (2.0 * nu))


def improvement_factor(model: DephasingModel, n: int = 100, total_time: float = 1.0) -> float:
    """Best Ramsey baseline divided by the optimal-measurement resolution.

    For nu >= 1 the closed form applies and depends on nu alone.  Below 1
    the ratio is computed numerically: both Ramsey baselines against the
    exact minimum of the variational expression (q = 1, zbar = 0) over a
    log-spaced interrogation-time grid refined by golden section.
    """
    nu = model.nu
    if nu >= 1.0:
        return improvement_closed_form(nu)
    _require(model.gamma > 0, "numeric improvement requires gamma > 0")
    ramsey_model = DephasingModel.uncorrelated(model.gamma, nu, n)
    baseline = min(
        ramsey_uncorrelated(ramsey_model, ProbeKind.PRODUCT_PLUS, total_time),
        ramsey_uncorrelated(ramsey_model, ProbeKind.GHZ, total_time),
    )

    def resolution(t: float) -> float:
        growth = _exp_or_inf(2.0 * model.gamma * t**nu) - 1.0
        return math.sqrt((1.0 + n * growth) / (n**2 * total_time * t))

    anchor = (1.0 / (2.0 * model.gamma * nu)) ** (1.0 / nu)
    _, best = _grid_refined_minimum(resolution, anchor)
    return baseline / best


def _grid_refined_minimum(fn, anchor: float, decades: float = 4.0, points: int = 161) -> tuple[float, float]:
    """Coarse log-grid scan around ``anchor`` followed by golden refinement."""
    grid = [anchor * 10.0 ** (decades * (2.0 * k / (points - 1) - 1.0)) for k in range(points)]
    values = [fn(t) for t in grid]
    k = min(range(points), key=values.__getitem__)
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, points - 1)]
    x, fx = golden_minimize(fn, lo, hi)
    if values[k] < fx:
        return grid[k], values[k]
    return x, fx


def golden_minimize(fn, a: float, b: float, rel_tol: float = 1e-8, max_iter: int = 300) -> tuple[float, float]:
    """Golden-section minimum of a unimodal function on [a, b]."""
    _require(a < b, "bracket must satisfy a < b")
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - (b - a) * inv_phi
    d = a + (b - a) * inv_phi
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if (b - a) <= rel_tol * max(abs(a), abs(b), 1e-12):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * inv_phi
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * inv_phi
            fd = fn(d)
    if fc < fd:
        return c, fc
    return d, fd


def optimal_time_numeric(resolution_fn, bracket: tuple[float, float]) -> float:
    """Golden-section minimizer of a unimodal resolution curve over t.

    Raises FlatFunctionError when no interior point improves on the bracket
    endpoints (flat or monotone input).
    """
    a, b = bracket
    _require(0.0 < a < b, "bracket must satisfy 0 < a < b")
    x, fx = golden_minimize(resolution_fn, a, b)
    edge = min(resolution_fn(a), resolution_fn(b))
    if not math.isfinite(fx):
        raise FlatFunctionError("resolution is not finite inside the bracket")
    if fx >= edge - 1e-12 * max(abs(edge), 1.0):
        raise FlatFunctionError("no interior descent found on the bracket")
    return x


def collective_family_qfi(n: int, nu: float, gamma: float, t: float, probe: ProbeKind) -> float:
    """Information content t**2 * X implied by the collective closed form.

    GHZ branch: X = n**2 (1 - sin(2 n**nu angle)**2).  Product branch:
    X = n - n**2 (sum_i C(n,i) sin(2 |n-2i|**nu angle))**2 / 2**(2n), which
    can turn negative in mid-range regimes; callers that need a resolution
    must reject nonpositive values.  ``angle`` satisfies
    cos(2 angle) = exp(-gamma t**nu).
    """
    _require(t > 0, "interrogation time must be positive")
    angle = math.acos(math.exp(-gamma * t**nu)) / 2.0
    if probe is ProbeKind.GHZ:
        x = n**2 * (1.0 - math.sin(2.0 * n**nu * angle) ** 2)
    elif probe is ProbeKind.PRODUCT_PLUS:
        total = sum(
            math.comb(n, i) * math.sin(2.0 * abs(n - 2 * i) ** nu * angle) for i in range(n + 1)
        )
        x = n - n**2 * total**2 / 2.0 ** (2 * n)
    else:
        raise ValueError("closed forms are defined for the product-plus and GHZ probes")
    return t**2 * x


def correlated_closed_form(n: int, nu: float, gamma: float, t: float, probe: ProbeKind) -> float:
    """Resolution 1/sqrt(t * X) of the collective-coupling family at T = 1."""
    value = collective_family_qfi(n, nu, gamma, t, probe)
    x = value / t**2
    if x <= 0.0:
        raise UndefinedResolutionError("vanishing or negative argument under the root")
    return 1.0 / math.sqrt(t * x)


def partial_env_amplitude_b(a: float, n: int = 2) -> float:
    """Product-state amplitude B paired with entangled amplitude A by the
    environment normalization."""
    return EnvInitState.from_amplitude(a, n).b


def partial_corr_argument(a: float, q: float) -> float:
    """Raw root argument 2 - 8 B**2 (A/sqrt(2) + B/2)**2 (1 + q) of the
    long-time partial-correlation form (n = 2); may be nonpositive."""
    b = partial_env_amplitude_b(a, 2)
    return 2.0 - 8.0 * b**2 * (a / math.sqrt(2.0) + b / 2.0) ** 2 * (1.0 + q)


def partial_corr_asymptote(a: float, q: float, t: float) -> float:
    """Long-time resolution 1/sqrt(t (2 - 8 B**2 (A/sqrt(2)+B/2)**2 (1+q)))
    for two particles, with B determined from A by normalization.

    q is the probe correlation <Z1 Z2>; at A = 1 the correction vanishes and
    the value is 1/sqrt(2 t) regardless of q.
    """
    _require(t > 0, "time must be positive")
    arg = partial_corr_argument(a, q)
    if arg <= 0.0:
        raise UndefinedResolutionError(
            f"root argument {arg:.6g} is not positive at A={a}, q={q}"
        )
    return 1.0 / math.sqrt(t * arg)


def parity_limit(n: int, nu: float) -> tuple[float, float, str]:
    """Classify the long-time behavior of the collective GHZ information.

    M = n**nu.  Even integer M: the sine factor dies and information keeps
    growing (classification "unbounded", limit 0).  Odd integer M: the sine
    factor saturates at 1 and information decays ("bounded", limit 1).
    Non-integer M: no limit is approached; the value of sin(M pi/2)**2 at
    the extremal angle pi/4 is reported ("nonconvergent").
    """
    m = float(n) ** nu
    rounded = round(m)
    if abs(m - rounded) <= 1e-9 * max(1.0, abs(m)):
        if rounded % 2 == 0:
            return m, 0.0, "even/unbounded"
        return m, 1.0, "odd/bounded"
    return m, math.sin(m * math.pi / 2.0) ** 2, "nonconvergent"
