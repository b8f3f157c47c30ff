"""Monotone Picard iteration for the coupled semilinear heat system.

The mild formulation

    u(t) = S(D1 t) mu + int_0^t S(D1 (t - s)) v(s)^p ds
    v(t) = S(D2 t) nu + int_0^t S(D2 (t - s)) u(s)^q ds

is iterated from (u_0, v_0) = (S(D1 t) mu, S(D2 t) nu).  Iterates increase
pointwise, so the scheme either converges to the minimal solution or
blows through any finite threshold; both outcomes are verdicts.

The Duhamel integral uses the composite left-endpoint rule on the graded
slice mesh.  Since all quadrature weights are positive and the propagator
is monotone, the discrete iteration inherits the pointwise monotonicity
of the continuum scheme, which is asserted at every step.  In Fourier
space the left-endpoint sums at consecutive slices satisfy

    A_j = e^{-D|xi|^2 (t_j - t_{j-1})} (A_{j-1} + w_{j-1} ghat_{j-1}),

so one sweep over slices costs O(J) transforms instead of O(J^2).
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .data import classify_case
from .fields import Field, GridGeometry
from .heat import heat_symbol
from .norms import (
    morrey_norm,
    phi_log_power,
    uniformly_local_lebesgue,
    uniformly_local_norm,
    NormSpec,
)

__all__ = [
    "SystemParams",
    "TimeSchedule",
    "IterationTrace",
    "MonotonicityError",
    "certified_schedule",
    "picard_step",
    "run_iteration",
    "scale_transform",
    "build_supersolution_caseA",
    "check_supersolution_caseA",
    "build_supersolution_caseF",
    "check_supersolution_caseF",
    "make_case_monitor",
    "monitor_bounded_quantities",
]


class MonotonicityError(AssertionError):
    """Iterates decreased beyond tolerance: quadrature or clamping bug."""


@dataclass(frozen=True)
class SystemParams:
    """Problem parameters (N, p, q, D1, D2) and the derived exponents."""

    N: int
    p: float
    q: float
    D1: float = 1.0
    D2: float = 1.0
    beta_A: float = None

    def __post_init__(self):
        if not (0 < self.p <= self.q):
            raise ValueError("need 0 < p <= q")
        if self.p * self.q <= 1:
            raise ValueError("need pq > 1")
        if self.D1 <= 0 or self.D2 <= 0:
            raise ValueError("diffusivities must be positive")
        if self.beta_A is not None:
            hi = self.q * (self.p + 1.0) / (self.q + 1.0)
            if not (1.0 < self.beta_A < hi and self.beta_A <= self.r2_star):
                raise ValueError(
                    f"beta_A must satisfy 1 < beta_A < {hi} and beta_A <= r2* = {self.r2_star}"
                )

    @property
    def case(self):
        return classify_case(self.N, self.p, self.q).label

    @property
    def r1_star(self):
        return self.N / 2.0 * (self.p * self.q - 1.0) / (self.p + 1.0)

    @property
    def r2_star(self):
        return self.N / 2.0 * (self.p * self.q - 1.0) / (self.q + 1.0)

    @property
    def beta_A_value(self):
        """Selected beta_A: midpoint-style default inside the admissible range."""
        if self.beta_A is not None:
            return self.beta_A
        hi = self.q * (self.p + 1.0) / (self.q + 1.0)
        return min(self.r2_star, 0.5 * (1.0 + hi))

    @property
    def alpha_A_value(self):
        return (self.q + 1.0) / (self.p + 1.0) * self.beta_A_value

    @property
    def alpha_B(self):
        return (self.q + 1.0) / (self.p + 1.0) * self.p / (self.p * self.q - 1.0)

    @property
    def beta_B(self):
        return 1.0 / (self.p * self.q - 1.0)

    @property
    def delta_DE(self):
        return -self.N / 2.0 * max(self.p - (self.N + 2.0) / (self.N * self.q), 0.0) + 1.0

    def exponent_table(self):
        return {
            "case": self.case,
            "r1_star": self.r1_star,
            "r2_star": self.r2_star,
            "alpha_A": self.alpha_A_value,
            "beta_A": self.beta_A_value,
            "alpha_B": self.alpha_B,
            "beta_B": self.beta_B,
            "delta_DE": self.delta_DE,
        }


@dataclass(frozen=True)
class TimeSchedule:
    """Graded slice times t_j = T (j/J)^grade, j = 1..J."""

    horizon: float
    slices: int
    grade: float = 2.0

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.slices < 2:
            raise ValueError("need at least two slices")
        if self.grade < 1.0:
            raise ValueError("grade must be >= 1")

    @property
    def times(self):
        j = np.arange(1, self.slices + 1, dtype=float)
        return self.horizon * (j / self.slices) ** self.grade

    @property
    def nodes(self):
        """Left-endpoint quadrature nodes: 0 and all interior slice times."""
        return np.concatenate([[0.0], self.times[:-1]])

    @property
    def weights(self):
        t = np.concatenate([[0.0], self.times])
        return np.diff(t)

    def resolution_certified(self, geometry, factor=10.0):
        """First slice must not sit in the band-limit regime t < factor * h^2.

        Below that, spectral propagation of rough data rings at an
        amplitude that can exceed the monotonicity tolerance.
        """
        return bool(self.times[0] >= factor * geometry.spacing ** 2)


def certified_schedule(T, slices, geometry, grade=2.0, factor=10.0):
    """Largest grading (then largest slice count) with t_1 >= factor * h^2.

    Keeps the requested grade when it already satisfies the resolution
    condition; otherwise flattens the grading toward uniform, and as a
    last resort thins the slices.
    """
    floor = factor * geometry.spacing ** 2
    if floor >= T:
        raise ValueError(
            f"horizon {T} is below the resolution floor {floor}; refine the grid"
        )
    J = slices
    while J >= 2:
        if T * (1.0 / J) ** grade >= floor:
            return TimeSchedule(T, J, grade)
        g_fit = np.log(T / floor) / np.log(J)
        if g_fit >= 1.0:
            return TimeSchedule(T, J, min(grade, float(g_fit)))
        J //= 2
    raise ValueError("no schedule satisfies the resolution condition")


def _spectral_sweep(geometry, D, times, source_hats, data_hat):
    """Fourier-space left-endpoint Duhamel sweep.

    source_hats[k] is the transform of the forcing at slice time t_{k+1};
    the quadrature runs over the mesh nodes inside (0, t_j), so the first
    output slice carries no forcing (the initial panel is dropped, an
    under-approximation of the nonnegative integrand).  Returns the
    physical-space slices
        S(D t_j) data + sum_{k=1}^{j-1} (t_{k+1}-t_k) S(D (t_j - t_k)) g_k
    clamped at 0.
    """
    out = np.empty((len(times),) + geometry.shape)
    acc = np.zeros_like(data_hat)
    prev_t = 0.0
    for j, t in enumerate(times):
        dt = t - prev_t
        step_sym = heat_symbol(geometry, D, dt)
        if j == 0:
            acc = np.zeros_like(data_hat)
        else:
            acc = step_sym * (acc + dt * source_hats[j - 1])
        total = heat_symbol(geometry, D, t) * data_hat + acc
        out[j] = np.maximum(np.fft.irfftn(total, s=geometry.shape), 0.0)
        prev_t = t
    return out


def _power_hats(slices, expo):
    """Transforms of the forcing at the interior slice times t_1..t_{J-1}."""
    with np.errstate(over="ignore", invalid="ignore"):
        rest = slices[:-1] ** expo
    return [np.fft.rfftn(row) for row in rest]


def picard_step(prev_u, prev_v, mu, nu, params, schedule, blowup_threshold=np.inf):
    """One monotone iteration: (u_n, v_n) -> (u_{n+1}, v_{n+1}).

    prev_u, prev_v are arrays of shape (J, *grid) holding the previous
    iterate at every slice time.  Returns (next_u, next_v, blew_up).
    """
    g = mu.geometry
    times = schedule.times
    if not (np.all(np.isfinite(prev_u)) and np.all(np.isfinite(prev_v))):
        return prev_u, prev_v, True
    u_hats = _power_hats(prev_v, params.p)
    v_hats = _power_hats(prev_u, params.q)
    next_u = _spectral_sweep(g, params.D1, times, u_hats, np.fft.rfftn(mu.values))
    next_v = _spectral_sweep(g, params.D2, times, v_hats, np.fft.rfftn(nu.values))
    blew = bool(
        not np.all(np.isfinite(next_u))
        or not np.all(np.isfinite(next_v))
        or next_u.max() > blowup_threshold
        or next_v.max() > blowup_threshold
    )
    return next_u, next_v, blew


@dataclass
class IterationTrace:
    """Per-iteration record of the scheme: deltas, maxima, monitored norms."""

    verdict: str = "inconclusive"
    n_iterations: int = 0
    deltas: list = dc_field(default_factory=list)
    sup_u: list = dc_field(default_factory=list)
    sup_v: list = dc_field(default_factory=list)
    monitors: list = dc_field(default_factory=list)
    monotone_margin: float = 0.0
    blowup_threshold: float = np.inf
    tol_converge: float = 0.0
    u_slices: np.ndarray = None
    v_slices: np.ndarray = None

    def summary(self):
        return {
            "verdict": self.verdict,
            "n_iterations": self.n_iterations,
            "deltas": [float(d) for d in self.deltas],
            "sup_u": [float(x) for x in self.sup_u],
            "sup_v": [float(x) for x in self.sup_v],
            "monitors": self.monitors,
            "monotone_margin": float(self.monotone_margin),
            "blowup_threshold": float(self.blowup_threshold),
            "tol_converge": float(self.tol_converge),
        }


def _semigroup_slices(data: Field, D, schedule):
    g = data.geometry
    hat = np.fft.rfftn(data.values)
    out = np.empty((schedule.slices,) + g.shape)
    for j, t in enumerate(schedule.times):
        out[j] = np.maximum(
            np.fft.irfftn(heat_symbol(g, D, t) * hat, s=g.shape), 0.0
        )
    return out


def run_iteration(mu, nu, params, schedule, n_max=30, tol_converge=1e-8,
                  blowup_threshold=None, monitor=None, keep_fields=False):
    """Iterate the scheme to a converged / blew_up / inconclusive verdict.

    Monotonicity of iterates is asserted at every step (tolerance
    1e-12 relative to the running scale); a violation is a hard error.
    tol_converge and the blow-up threshold are relative to the data scale.
    """
    if mu.geometry != nu.geometry:
        raise ValueError("mu and nu must share a geometry")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    data_scale = 1.0 + max(mu.max, nu.max)
    if blowup_threshold is None:
        blowup_threshold = 1e12 * data_scale
    trace = IterationTrace(blowup_threshold=blowup_threshold, tol_converge=tol_converge)
    u = _semigroup_slices(mu, params.D1, schedule)
    v = _semigroup_slices(nu, params.D2, schedule)
    if monitor is not None:
        trace.monitors.append(monitor(u, v, schedule))
    trace.sup_u.append(float(u.max()))
    trace.sup_v.append(float(v.max()))
    worst_margin = 0.0
    for n in range(1, n_max + 1):
        nu_next, nv_next, blew = picard_step(u, v, mu, nu, params, schedule,
                                             blowup_threshold)
        trace.n_iterations = n
        if blew:
            trace.verdict = "blew_up"
            break
        scale = max(1.0, data_scale, float(nu_next.max()), float(nv_next.max()))
        margin = min(float((nu_next - u).min()), float((nv_next - v).min()))
        worst_margin = min(worst_margin, margin)
        if margin < -1e-12 * scale:
            raise MonotonicityError(
                f"iterate decreased by {margin!r} at n={n} (scale {scale!r})"
            )
        delta = max(
            float(np.abs(nu_next - u).max()), float(np.abs(nv_next - v).max())
        )
        trace.deltas.append(delta)
        trace.sup_u.append(float(nu_next.max()))
        trace.sup_v.append(float(nv_next.max()))
        u, v = nu_next, nv_next
        if monitor is not None:
            trace.monitors.append(monitor(u, v, schedule))
        if delta < tol_converge * scale:
            trace.verdict = "converged"
            break
    trace.monotone_margin = worst_margin
    if keep_fields:
        trace.u_slices = u
        trace.v_slices = v
    return trace


def scale_transform(mu: Field, nu: Field, params: SystemParams, T, k=None):
    """Parabolic rescaling to unit horizon; k = sqrt(max D) normalizes max D to 1.

    Densities transform as mu_hat(x) = T^((p+1)/(pq-1)) mu(k sqrt(T) x)
    (nu with exponent (q+1)/(pq-1)); on the grid this is a pure scaling of
    values and of the box half-width, so the round trip is exact.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if k is None:
        k = max(params.D1, params.D2) ** 0.5
    if k <= 0:
        raise ValueError("k must be positive")
    pq1 = params.p * params.q - 1.0
    g = mu.geometry
    factor = k * T ** 0.5
    new_geom = GridGeometry(g.dim, g.half_width / factor, g.cells_per_axis)
    mu_hat = Field(new_geom, T ** ((params.p + 1.0) / pq1) * mu.values)
    nu_hat = Field(new_geom, T ** ((params.q + 1.0) / pq1) * nu.values)
    new_params = SystemParams(
        params.N, params.p, params.q, params.D1 / k ** 2, params.D2 / k ** 2,
        beta_A=params.beta_A,
    )
    return mu_hat, nu_hat, new_params


# ---------------------------------------------------------------------------
# supersolutions


def _require_unit_max_diffusivity(params):
    if abs(max(params.D1, params.D2) - 1.0) > 1e-12:
        raise ValueError(
            "supersolution construction assumes max(D1, D2) = 1; "
            "apply scale_transform first"
        )


def build_supersolution_caseA(mu, nu, params, schedule, beta_A=None):
    """Heat-flow supersolution for the strongest-singularity regime.

    w(t) = S(t)(mu^aA + nu^bA), ubar = 2 D^{-N/2} w^{1/aA},
    vbar = 2 D^{-N/2} w^{1/bA}, with D = min(D1, D2) and max(D1, D2) = 1.
    Returns a dict with per-slice arrays for w, ubar, vbar and the values
    at the t = 0 quadrature node.
    """
    if params.case != "A":
        raise ValueError(f"case is {params.case}, supersolution needs A")
    _require_unit_max_diffusivity(params)
    bA = beta_A if beta_A is not None else params.beta_A_value
    hi = params.q * (params.p + 1.0) / (params.q + 1.0)
    if not (1.0 < bA < hi and bA <= params.r2_star):
        raise ValueError(f"beta_A = {bA} violates 1 < beta_A < {hi}, <= {params.r2_star}")
    aA = (params.q + 1.0) / (params.p + 1.0) * bA
    D = min(params.D1, params.D2)
    pref = 2.0 * D ** (-params.N / 2.0)
    base = Field(mu.geometry, mu.values ** aA + nu.values ** bA)
    w = _semigroup_slices(base, 1.0, schedule)
    return {
        "alpha_A": aA,
        "beta_A": bA,
        "prefactor": pref,
        "base": base,
        "w": w,
        "ubar": pref * w ** (1.0 / aA),
        "vbar": pref * w ** (1.0 / bA),
        "ubar0": pref * base.values ** (1.0 / aA),
        "vbar0": pref * base.values ** (1.0 / bA),
    }


def _duhamel_of_series(geometry, D, schedule, slice_values, expo):
    """Left-endpoint Duhamel integral of a given time series raised to expo."""
    hats = _power_hats(slice_values, expo)
    zero = np.zeros(np.fft.rfftn(np.zeros(geometry.shape)).shape, dtype=complex)
    return _spectral_sweep(geometry, D, schedule.times, hats, zero)


def check_supersolution_caseA(sup, mu, nu, params, schedule):
    """Pointwise supersolution inequalities for the case-A candidate.

    Checks, at every slice and cell,
      S(D2 t) nu + int_0^t S(D2 (t-s)) ubar(s)^q ds <= vbar(t)
      S(D1 t) mu + int_0^t S(D1 (t-s)) vbar(s)^p ds <= ubar(t)
    plus the semigroup identity w(t) = S(t - s) w(s).  Margins are signed
    (negative = satisfied) and normalized by the supersolution scale.
    """
    g = mu.geometry
    lhs_v = _semigroup_slices(nu, params.D2, schedule) + _duhamel_of_series(
        g, params.D2, schedule, sup["ubar"], params.q
    )
    lhs_u = _semigroup_slices(mu, params.D1, schedule) + _duhamel_of_series(
        g, params.D1, schedule, sup["vbar"], params.p
    )
    viol_v = float((lhs_v - sup["vbar"]).max())
    viol_u = float((lhs_u - sup["ubar"]).max())
    scale = max(float(sup["ubar"].max()), float(sup["vbar"].max()), 1e-300)
    # semigroup identity along consecutive slices
    times = schedule.times
    semi_err = 0.0
    w = sup["w"]
    for j in range(1, len(times)):
        hat = np.fft.rfftn(w[j - 1])
        prop = np.fft.irfftn(
            heat_symbol(g, 1.0, times[j] - times[j - 1]) * hat, s=g.shape
        )
        semi_err = max(semi_err, float(np.abs(prop - w[j]).max()))
    w_scale = max(float(w.max()), 1e-300)
    return {
        "worst_violation_u": viol_u,
        "worst_violation_v": viol_v,
        "scale": scale,
        "passed": bool(max(viol_u, viol_v) <= 1e-10 * scale),
        "semigroup_identity_error": semi_err / w_scale,
    }


def build_supersolution_caseF(mu, nu, params, schedule):
    """Supersolution for the weak-singularity regime: both components equal

    w(t) = 2 D^{-N/2} S(t)(mu + nu) + 2t, valid for small horizons.
    """
    if params.case != "F":
        raise ValueError(f"case is {params.case}, supersolution needs F")
    _require_unit_max_diffusivity(params)
    D = min(params.D1, params.D2)
    pref = 2.0 * D ** (-params.N / 2.0)
    base = Field(mu.geometry, mu.values + nu.values)
    smoothed = _semigroup_slices(base, 1.0, schedule)
    t_col = schedule.times.reshape((-1,) + (1,) * mu.geometry.dim)
    w = pref * smoothed + 2.0 * t_col
    return {"prefactor": pref, "base": base, "w": w, "w0": pref * base.values}


def check_supersolution_caseF(sup, mu, nu, params, schedule):
    """Pointwise inequalities for the case-F candidate (both components)."""
    g = mu.geometry
    w = sup["w"]
    lhs_v = _semigroup_slices(nu, params.D2, schedule) + _duhamel_of_series(
        g, params.D2, schedule, w, params.q
    )
    lhs_u = _semigroup_slices(mu, params.D1, schedule) + _duhamel_of_series(
        g, params.D1, schedule, w, params.p
    )
    viol_v = float((lhs_v - w).max())
    viol_u = float((lhs_u - w).max())
    # S(t - s) w(s) <= w(t) along consecutive slices
    times = schedule.times
    prop_viol = -np.inf
    for j in range(1, len(times)):
        hat = np.fft.rfftn(w[j - 1])
        prop = np.fft.irfftn(
            heat_symbol(g, 1.0, times[j] - times[j - 1]) * hat, s=g.shape
        )
        prop_viol = max(prop_viol, float((prop - w[j]).max()))
    scale = max(float(w.max()), 1e-300)
    return {
        "worst_violation_u": viol_u,
        "worst_violation_v": viol_v,
        "propagation_violation": prop_viol,
        "scale": scale,
        "passed": bool(max(viol_u, viol_v, prop_viol) <= 1e-10 * scale),
    }


# ---------------------------------------------------------------------------
# monitored quantities


def _slice_sample(schedule, count=8):
    j = np.unique(np.linspace(0, schedule.slices - 1, count).astype(int))
    return j, schedule.times[j]


def make_case_monitor(params: SystemParams, T, geometry: GridGeometry, phi=None,
                      slice_count=6, stride=4, radii_cap=48):
    """Monitor callback computing the case-appropriate bounded quantities.

    Returns a callable (u_slices, v_slices, schedule) -> {name: sup over
    sampled slice times of the weighted norm}.  The window radius is
    min(sqrt(T), L/4) as fixed in the design notes.
    """
    case = params.case
    N = params.N
    log_phi = phi_log_power(1.0)
    phi = phi or log_phi
    geom = geometry

    def monitor(u, v, schedule):
        R = min(np.sqrt(T), geom.half_width / 4.0)
        idx, times = _slice_sample(schedule, slice_count)
        out = {}

        def field(row):
            return Field(geom, row)

        if case == "A":
            qty = {"morrey_u": [], "morrey_v": [], "linf_u": [], "linf_v": []}
            for j, t in zip(idx, times):
                fu, fv = field(u[j]), field(v[j])
                qty["morrey_u"].append(
                    morrey_norm(fu, params.r1_star, params.alpha_A_value, R,
                                stride=stride, radii_cap=radii_cap)
                )
                qty["morrey_v"].append(
                    morrey_norm(fv, params.r2_star, params.beta_A_value, R,
                                stride=stride, radii_cap=radii_cap)
                )
                qty["linf_u"].append(t ** (N / (2 * params.r1_star)) * fu.max)
                qty["linf_v"].append(t ** (N / (2 * params.r2_star)) * fv.max)
            out = {k: float(np.max(vals)) for k, vals in qty.items()}
        elif case == "B":
            r_mid = 0.5 * ((params.q + 1.0) / (params.p + 1.0) + params.q)
            a_star = params.beta_B / 2.0
            pbB = params.p * params.beta_B
            qty = {"primed_u": [], "mid_u": [], "linf_u": [], "strong_v": [], "linf_v": []}
            for j, t in zip(idx, times):
                fu, fv = field(u[j]), field(v[j])
                lg = float(log_phi.at_inv(t))
                qty["primed_u"].append(
                    uniformly_local_norm(
                        fu,
                        NormSpec("primed", (params.q + 1) / (params.p + 1),
                                 params.alpha_B, R, log_phi, stride),
                    )
                )
                qty["mid_u"].append(
                    t ** (N / 2 * ((params.p + 1) / (params.q + 1) - 1 / r_mid))
                    * lg ** (pbB - a_star / r_mid)
                    * uniformly_local_norm(
                        fu, NormSpec("strong", r_mid, a_star, R, log_phi, stride)
                    )
                )
                qty["linf_u"].append(
                    t ** (N / 2 * (params.p + 1) / (params.q + 1)) * lg ** pbB * fu.max
                )
                qty["strong_v"].append(
                    uniformly_local_norm(
                        fv, NormSpec("strong", 1.0, params.beta_B, R, log_phi, stride)
                    )
                )
                qty["linf_v"].append(t ** (N / 2) * lg ** params.beta_B * fv.max)
            out = {k: float(np.max(vals)) for k, vals in qty.items()}
        elif case == "C":
            gam = N / 4.0
            pp = params.p
            qty = {"strong_uv": [], "mid_uv": [], "linf_uv": []}
            for j, t in zip(idx, times):
                fu, fv = field(u[j]), field(v[j])
                lg = float(log_phi.at_inv(t))
                s_u = uniformly_local_norm(
                    fu, NormSpec("strong", 1.0, N / 2.0, R, log_phi, stride)
                )
                s_v = uniformly_local_norm(
                    fv, NormSpec("strong", 1.0, N / 2.0, R, log_phi, stride)
                )
                qty["strong_uv"].append(s_u + s_v)
                m_u = uniformly_local_norm(
                    fu, NormSpec("strong", pp, gam, R, log_phi, stride)
                )
                m_v = uniformly_local_norm(
                    fv, NormSpec("strong", pp, gam, R, log_phi, stride)
                )
                qty["mid_uv"].append(
                    t ** (N / 2 * (1 - 1 / pp)) * lg ** (-gam / pp + N / 2.0) * (m_u + m_v)
                )
                qty["linf_uv"].append(t ** (N / 2) * lg ** (N / 2.0) * (fu.max + fv.max))
            out = {k: float(np.max(vals)) for k, vals in qty.items()}
        elif case in ("D", "E"):
            r_lo = max(N * params.q / (N + 2.0), 1.0 / params.p)
            r_star = 0.5 * (r_lo + params.q)
            qty = {"lr_u": [], "linf_u": [], "l1_v": [], "linf_v": []}
            for j, t in zip(idx, times):
                fu, fv = field(u[j]), field(v[j])
                ph = float(phi.at_inv(t))
                qty["lr_u"].append(
                    t ** (N / 2 * ((N + 2) / (N * params.q) - 1 / r_star))
                    * ph
                    * uniformly_local_lebesgue(fu, r_star, R, stride)
                )
                qty["linf_u"].append(t ** ((N + 2) / (2 * params.q)) * ph * fu.max)
                qty["l1_v"].append(uniformly_local_lebesgue(fv, 1.0, R, stride))
                qty["linf_v"].append(t ** (N / 2) * fv.max)
            out = {k: float(np.max(vals)) for k, vals in qty.items()}
        else:
            raise ValueError(f"no monitored quantities for case {case}")
        return out

    return monitor


def monitor_bounded_quantities(trace: IterationTrace, params: SystemParams, T):
    """Summarize monitored norms across iterations (regimes B, C, D, E).

    The boundedness pattern asserted is max over n of each quantity at
    most twice its n = 0 (pure semigroup) value.
    """
    if params.case not in ("B", "C", "D", "E"):
        raise ValueError(f"monitored quantities are defined for B-E, not {params.case}")
    if not trace.monitors:
        raise ValueError("trace carries no monitor records")
    return summarize_monitors(trace.monitors)


def summarize_monitors(monitors):
    """Bounded-in-n report for a list of per-iteration monitor dicts."""
    names = sorted(monitors[0])
    out = {}
    all_ok = True
    for name in names:
        series = [m[name] for m in monitors]
        base = series[0]
        peak = max(series)
        bounded = bool(peak <= 2.0 * base) if base > 0 else bool(peak == 0.0)
        all_ok = all_ok and bounded
        out[name] = {
            "n0": float(base),
            "max_over_n": float(peak),
            "bounded": bounded,
            "series": [float(x) for x in series],
        }
    out["all_bounded"] = all_ok
    return out
