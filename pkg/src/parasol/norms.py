"""Weight functions and every norm used by the laboratory.

Implements the pluggable weight family Phi (non-decreasing, Phi(0) = 1,
doubling under squaring, and power-dominated growth), the weak and
strong-average log-corrected norms built on rearrangements, their
uniformly local windowed versions, and uniformly local Morrey norms.

All suprema over the measure variable s are computed from the step
structure of the rearrangement: on each interval between breakpoints the
quantity being maximized is smooth (weight times a linear running
integral), so the supremum sits at an interval endpoint or at a root of
an explicit derivative.  Global (unwindowed) norms locate those roots;
windowed norms use the breakpoint-plus-midpoint grid, a lower bound whose
gap vanishes with the cell size.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .fields import Field
from .rearrange import StepProfile, rearrange, power_profile

__all__ = [
    "PhiSpec",
    "PhiAxiomError",
    "NormSpec",
    "phi_identity",
    "phi_log_power",
    "weak_zygmund_norm",
    "strong_average_norm",
    "primed_norm",
    "maximal_weighted_sup",
    "uniformly_local_norm",
    "uniformly_local_lebesgue",
    "morrey_norm",
    "evaluate_norm",
    "phi_axiom_report",
    "lemma_integral_bounds_check",
    "sup_norm",
]

_PHI_INPUT_CAP = 1e300


class PhiAxiomError(ValueError):
    """Raised when a weight function fails a required axiom."""


@dataclass(frozen=True)
class PhiSpec:
    """A non-decreasing weight Phi on [0, infinity) with Phi(0) = 1.

    family is one of "identity", "log_power" (Phi(tau) = log(e+tau)^power),
    or "user"/"derived" with a supplied vectorized callable.  Inputs are
    capped at 1e300 so weights stay finite on denormal-scale arguments.
    """

    family: str
    power: float = 0.0
    func: object = None
    func_log: object = None
    label: str = ""

    def __call__(self, tau):
        tau = np.minimum(np.asarray(tau, dtype=float), _PHI_INPUT_CAP)
        if self.family == "identity":
            out = np.ones_like(tau)
        elif self.family == "log_power":
            out = np.log(np.e + tau) ** self.power
        else:
            out = np.asarray(self.func(tau), dtype=float)
        return out if out.ndim else float(out)

    def at_exp(self, u):
        """Phi(e^u), stable for arguments far beyond the float range."""
        u = np.asarray(u, dtype=float)
        if self.family == "identity":
            out = np.ones_like(u)
        elif self.family == "log_power":
            out = np.logaddexp(1.0, u) ** self.power
        elif self.func_log is not None:
            out = np.asarray(self.func_log(u), dtype=float)
        else:
            with np.errstate(over="ignore"):
                out = self(np.exp(np.minimum(u, 690.0)))
        return out if out.ndim else float(out)

    def at_inv(self, s):
        """Phi(s^-1) for s > 0, vectorized."""
        s = np.asarray(s, dtype=float)
        with np.errstate(over="ignore", divide="ignore"):
            inv = np.where(s < 1.0 / _PHI_INPUT_CAP, _PHI_INPUT_CAP, 1.0 / s)
        return self(inv)

    def log_at_inv(self, s):
        """log Phi(s^-1), computed stably for the builtin families."""
        s = np.asarray(s, dtype=float)
        if self.family == "identity":
            out = np.zeros_like(s)
        elif self.family == "log_power":
            inv = np.where(s < 1.0 / _PHI_INPUT_CAP, _PHI_INPUT_CAP, 1.0 / s)
            out = self.power * np.log(np.log(np.e + inv))
        else:
            out = np.log(self.at_inv(s))
        return out if out.ndim else float(out)

    def dlog_at_inv(self, s):
        """d/ds of log Phi(s^-1); non-positive since Phi is non-decreasing."""
        s = np.asarray(s, dtype=float)
        if self.family == "identity":
            out = np.zeros_like(s)
        elif self.family == "log_power":
            ell = np.log(np.e + 1.0 / s)
            out = -self.power / (s * (np.e * s + 1.0) * ell)
        else:
            eps = 1e-6
            out = (self.log_at_inv(s * (1 + eps)) - self.log_at_inv(s * (1 - eps))) / (
                2 * eps * s
            )
        return out if out.ndim else float(out)


def phi_identity():
    return PhiSpec("identity", label="1")


def phi_log_power(a):
    if a < 0:
        raise ValueError("log power must be >= 0")
    if a == 0:
        return phi_identity()
    return PhiSpec("log_power", power=float(a), label=f"log^{a:g}")


@dataclass(frozen=True)
class NormSpec:
    """Which norm to evaluate: kind in {weak, strong, primed, morrey}.

    R is the window radius (inf for the global norm).  For the morrey
    kind, alpha is the inner Lebesgue exponent (1 <= alpha <= r) and phi
    is ignored.
    """

    kind: str
    r: float
    alpha: float
    R: float = np.inf
    phi: PhiSpec = dc_field(default_factory=phi_identity)
    stride: int = 1

    def __post_init__(self):
        if self.kind not in ("weak", "strong", "primed", "morrey"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "morrey":
            if not 1 <= self.alpha <= self.r:
                raise ValueError("morrey requires 1 <= alpha <= r")
        else:
            if self.r < 1:
                raise ValueError("r must be >= 1")
            if self.kind == "primed" and self.r <= 1:
                raise ValueError("primed norm requires r > 1")
            if self.alpha < 0:
                raise ValueError("alpha must be >= 0")
        if self.R <= 0:
            raise ValueError("window radius must be positive")


# ---------------------------------------------------------------------------
# suprema over s for step profiles


def _g_log(s):
    """(e s + 1) log(e + 1/s); the stationary-point function of s^sigma L^c."""
    return (np.e * s + 1.0) * np.log(np.e + 1.0 / s)


_G_LOG_MIN = None


def _g_log_min():
    global _G_LOG_MIN
    if _G_LOG_MIN is None:
        res = minimize_scalar(
            lambda y: _g_log(np.exp(y)), bounds=(-8.0, 8.0), method="bounded"
        )
        _G_LOG_MIN = (float(np.exp(res.x)), float(res.fun))
    return _G_LOG_MIN


def _weight_stationary_points(phi, sigma, beta):
    """Interior critical points of s^sigma * Phi(1/s)^beta (log-power family)."""
    if sigma <= 0 or beta <= 0 or phi.family != "log_power":
        return ()
    c = beta * phi.power / sigma
    s_min, g_min = _g_log_min()
    if c <= g_min:
        return ()
    f = lambda s: _g_log(s) - c
    lo = s_min
    while f(lo) < 0 and lo > 1e-280:
        lo /= 1e4
    hi = s_min
    while f(hi) < 0 and hi < 1e280:
        hi *= 1e4
    left = brentq(f, lo, s_min, xtol=1e-300, rtol=1e-14)
    right = brentq(f, s_min, hi, rtol=1e-14)
    return (left, right)


def _interval_roots(phi, sigma, beta, a, b, c_lin, m_lin):
    """Roots of d/ds [s^sigma Phi(1/s)^beta (c + m s)] inside [a, b].

    The derivative sign equals the sign of
        sigma/s + beta * dlogPhi_inv(s) + m/(c + m s),
    sampled at five points per interval; a bracketed solve runs wherever
    the sign flips.
    """

    def bracket(s):
        return sigma / s + beta * phi.dlog_at_inv(s) + m_lin / (c_lin + m_lin * s)

    out = []
    ts = np.geomspace(a, b, 5)
    vals = [bracket(t) for t in ts]
    for i in range(4):
        if np.sign(vals[i]) * np.sign(vals[i + 1]) < 0:
            out.append(brentq(bracket, ts[i], ts[i + 1], rtol=1e-14))
    return out


def _bundle_sups(profile: StepProfile, phi: PhiSpec, r, alpha, want=("weak", "strong", "primed")):
    """Suprema of the weak, strong and primed integrands of one profile.

    Returns a dict mapping kind to the supremum of the r-th power of the
    corresponding norm (weak: s Phi^a f*^r; strong: Phi^a F_r; primed:
    s Phi^a f**^r), all evaluated over one shared candidate set so the
    pointwise orderings between the three survive in the computed values.
    """
    if profile.levels.size == 0:
        return {k: 0.0 for k in want}
    b = profile.breakpoints
    v = profile.levels
    widths = np.diff(b)
    v_r = v ** r
    cum_r = np.concatenate([[0.0], np.cumsum(v_r * widths)])
    cum_1 = profile.cumulative

    lo = np.where(b[:-1] > 0, b[:-1], b[1] * 1e-6)
    hi = b[1:]
    mid = np.sqrt(lo * hi)
    cand = [lo, mid, hi]

    station = set()
    station.update(_weight_stationary_points(phi, 1.0, alpha))
    for s0 in station:
        idx = np.searchsorted(b, s0) - 1
        if 0 <= idx < v.size:
            col = np.where(np.arange(v.size) == idx, s0, mid)
            cand.append(col)

    # interior roots of the strong and primed integrands: sample the
    # derivative sign at lo/mid/hi per interval, solve only where it flips
    if phi.family != "identity" and alpha > 0:
        root_specs = []
        if "strong" in want:
            root_specs.append((0.0, alpha, cum_r[:-1] - v_r * b[:-1], v_r))
        if "primed" in want and r > 1:
            root_specs.append((1.0 / r - 1.0, alpha / r, cum_1[:-1] - v * b[:-1], v))
        for sigma, beta, c_lin, m_lin in root_specs:
            samples = np.stack([lo, mid, hi])
            with np.errstate(divide="ignore"):
                D = (
                    sigma / samples
                    + beta * phi.dlog_at_inv(samples)
                    + m_lin[None, :] / (c_lin[None, :] + m_lin[None, :] * samples)
                )
            flips = np.nonzero(np.any(np.diff(np.sign(D), axis=0) != 0, axis=0))[0]
            if flips.size == 0:
                continue
            roots_col = mid.copy()
            for k in flips:
                roots = _interval_roots(phi, sigma, beta, lo[k], hi[k], c_lin[k], m_lin[k])
                if roots:
                    roots_col[k] = roots[0]
            cand.append(roots_col)

    S = np.stack(cand)  # (n_cand, K); column k holds s values inside interval k
    with np.errstate(over="ignore"):
        logphi = phi.log_at_inv(S)
        out = {}
        if "weak" in want:
            integ = np.log(S) + alpha * logphi + r * np.log(v)[None, :]
            out["weak"] = float(np.exp(integ).max())
        if "strong" in want:
            F_r = cum_r[:-1][None, :] + v_r[None, :] * (S - b[:-1][None, :])
            out["strong"] = float((np.exp(alpha * logphi) * F_r).max())
            # beyond the support the running integral is constant and the
            # weight non-increasing, so b_K (already a candidate) covers it
        if "primed" in want:
            F_1 = cum_1[:-1][None, :] + v[None, :] * (S - b[:-1][None, :])
            integ = (1.0 - r) * np.log(S) + alpha * logphi + r * np.log(F_1)
            out["primed"] = float(np.exp(integ).max())
    return out


def weak_zygmund_norm(f, r, alpha=0.0, phi=None, profile=None):
    """Weak norm sup_s {s Phi(1/s)^alpha f*(s)^r}^(1/r); r = inf gives sup f."""
    phi = phi or phi_identity()
    if profile is None:
        profile = rearrange(f)
    if r == np.inf:
        return profile.max_level
    if r < 1:
        raise ValueError("r must be >= 1")
    return _bundle_sups(profile, phi, r, alpha, want=("weak",))["weak"] ** (1.0 / r)


def strong_average_norm(f, r, alpha=0.0, phi=None, profile=None):
    """Strong-average norm sup_s {s Phi(1/s)^alpha (|f|^r)**(s)}^(1/r)."""
    phi = phi or phi_identity()
    if profile is None:
        profile = rearrange(f)
    if r == np.inf:
        return profile.max_level
    if r < 1:
        raise ValueError("r must be >= 1")
    return _bundle_sups(profile, phi, r, alpha, want=("strong",))["strong"] ** (1.0 / r)


def primed_norm(f, r, alpha=0.0, phi=None, profile=None):
    """Equivalent norm sup_s s^(1/r) Phi(1/s)^(alpha/r) f**(s); requires r > 1."""
    if r <= 1:
        raise ValueError("primed norm requires r > 1")
    phi = phi or phi_identity()
    if profile is None:
        profile = rearrange(f)
    if r == np.inf:
        return profile.max_level
    return _bundle_sups(profile, phi, r, alpha, want=("primed",))["primed"] ** (1.0 / r)


def maximal_weighted_sup(f, r, alpha=0.0, phi=None, profile=None):
    """sup_s s^(1/r) Phi(1/s)^(alpha/r) f**(s) for r >= 1.

    At r = 1 this coincides with the strong-average norm; for r > 1 it is
    the equivalent (primed) norm.  Kept separate so the maximal-function
    bounds can be checked at r = 1 where the primed norm is undefined.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    phi = phi or phi_identity()
    if profile is None:
        profile = rearrange(f)
    if r == 1:
        return _bundle_sups(profile, phi, 1.0, alpha, want=("strong",))["strong"]
    return _bundle_sups(profile, phi, r, alpha, want=("primed",))["primed"] ** (1.0 / r)


def sup_norm(f: Field):
    return f.max


# ---------------------------------------------------------------------------
# windowed (uniformly local) norms


def _window_offsets(geometry, R):
    """Index offsets of cells whose periodic center distance is < R."""
    d = geometry.periodic_radii()
    mask = d < R
    idx = np.nonzero(mask.ravel(order="C"))[0]
    return idx


def _window_rows(field: Field, R, stride):
    """Sorted (descending) window contents for every ball center.

    Returns (rows, atom): rows[i] holds the field values in the window
    around the i-th center, sorted descending.  Centers run over grid
    points with the given stride.
    """
    g = field.geometry
    if R < 2 * g.spacing:
        raise ValueError("window radius must be at least two cells")
    m = g.cells_per_axis
    offsets = _window_offsets(g, R)
    flat = field.values.ravel(order="C")
    if g.dim == 1:
        centers = np.arange(0, m, stride)
        idx = (centers[:, None] + offsets[None, :]) % m
    else:
        shape = g.shape
        off_multi = np.stack(np.unravel_index(offsets, shape), axis=1)  # (W, dim)
        axes = [np.arange(0, m, stride)] * g.dim
        grids = np.meshgrid(*axes, indexing="ij")
        cent_multi = np.stack([c.ravel() for c in grids], axis=1)  # (C, dim)
        coords = (cent_multi[:, None, :] + off_multi[None, :, :]) % m
        if g.dim == 2:
            idx = coords[..., 0] * m + coords[..., 1]
        else:
            idx = (coords[..., 0] * m + coords[..., 1]) * m + coords[..., 2]
    rows = flat[idx]
    rows.sort(axis=1)
    return rows[:, ::-1], g.cell_volume


def _windowed_bundle(rows, atom, phi, r, alpha, want):
    """Per-center suprema on the shared breakpoint grid of sorted windows."""
    n_c, W = rows.shape
    b = atom * np.arange(W + 1)
    lo = np.where(b[:-1] > 0, b[:-1], atom * 1e-6)
    hi = b[1:]
    cols = [lo, np.sqrt(lo * hi), hi]
    for s0 in _weight_stationary_points(phi, 1.0, alpha):
        idx = min(max(int(np.searchsorted(b, s0)) - 1, 0), W - 1)
        col = np.sqrt(lo * hi)
        col[idx] = s0
        cols.append(col)
    S = np.stack(cols)  # (n_cand, W)
    logphi = phi.log_at_inv(S)
    out = {}
    with np.errstate(divide="ignore", over="ignore"):
        if "weak" in want:
            w = S * np.exp(alpha * logphi)  # (n_cand, W)
            Wk = w.max(axis=0)
            out["weak"] = (rows ** r * Wk[None, :]).max(axis=1) ** (1.0 / r)
        if "strong" in want or "primed" in want:
            if "strong" in want:
                pw = rows ** r
                F = np.concatenate(
                    [np.zeros((n_c, 1)), np.cumsum(pw * atom, axis=1)], axis=1
                )
                Fs = F[:, :-1][:, None, :] + pw[:, None, :] * (S - b[:-1])[None, :, :]
                vals = np.exp(alpha * logphi)[None, :, :] * Fs
                out["strong"] = vals.max(axis=(1, 2)) ** (1.0 / r)
            if "primed" in want:
                F = np.concatenate(
                    [np.zeros((n_c, 1)), np.cumsum(rows * atom, axis=1)], axis=1
                )
                Fs = F[:, :-1][:, None, :] + rows[:, None, :] * (S - b[:-1])[None, :, :]
                wgt = np.exp((1.0 / r - 1.0) * np.log(S) + (alpha / r) * logphi)
                out["primed"] = (wgt[None, :, :] * Fs).max(axis=(1, 2))
    return out


def uniformly_local_norm(f: Field, spec: NormSpec):
    """Windowed norm: sup over ball centers of the norm of f restricted there.

    Centers run over grid points with spec.stride; windows use cell-center
    membership with periodic wrap.  The computed value is a lower bound of
    the continuum supremum whose gap vanishes with the cell size.
    """
    if spec.kind == "morrey":
        return morrey_norm(f, spec.r, spec.alpha, spec.R, stride=spec.stride)
    if not np.isfinite(spec.R):
        if spec.kind == "weak":
            return weak_zygmund_norm(f, spec.r, spec.alpha, spec.phi)
        if spec.kind == "strong":
            return strong_average_norm(f, spec.r, spec.alpha, spec.phi)
        return primed_norm(f, spec.r, spec.alpha, spec.phi)
    rows, atom = _window_rows(f, spec.R, spec.stride)
    if spec.r == np.inf:
        return float(rows[:, 0].max())
    got = _windowed_bundle(rows, atom, spec.phi, spec.r, spec.alpha, (spec.kind,))
    return float(got[spec.kind].max())


def _ball_sums(values_pow, geometry, radii):
    """Window sums of a non-negative array over balls of the given radii.

    Returns an array (n_radii, *grid): circular convolution with the
    indicator of {periodic distance <= radius}, computed spectrally.
    """
    fhat = np.fft.rfftn(values_pow)
    d = geometry.periodic_radii()
    out = np.empty((len(radii),) + geometry.shape)
    for i, rad in enumerate(radii):
        ker = (d <= rad).astype(float)
        khat = np.fft.rfftn(ker)
        out[i] = np.fft.irfftn(fhat * khat, s=geometry.shape)
    return np.maximum(out, 0.0)


def _morrey_radii(geometry, R, cap=4096):
    """Window radii: distinct cell-entry distances below R, thinned to cap,
    always joined with a dyadic ladder R/2^j."""
    d = np.unique(geometry.periodic_radii().ravel())
    d = d[d < R]
    if d.size == 0:
        d = np.array([0.0])
    if d.size > cap:
        sel = np.unique(np.linspace(0, d.size - 1, cap).astype(int))
        d = d[sel]
    ladder = R / 2.0 ** np.arange(1, 13)
    snapped = []
    all_d = np.unique(geometry.periodic_radii().ravel())
    for x in ladder:
        i = np.searchsorted(all_d, x, side="right") - 1
        if i >= 0:
            snapped.append(all_d[i])
    return np.unique(np.concatenate([d, snapped]))


def morrey_norm(f: Field, r, alpha, R, stride=1, radii_cap=4096):
    """Uniformly local Morrey norm with discrete window measures.

    sup over centers x and window radii sigma < R of
    |B|^(1/r - 1/alpha) * ||f||_{L^alpha(B)}, where |B| is the measure
    (cell count times h^N) of the discrete window.  Using the discrete
    measure keeps the Hoelder-based monotonicity and power identities
    exact on the grid.  r = inf returns the sup norm.
    """
    if not 1 <= alpha <= r:
        raise ValueError("need 1 <= alpha <= r")
    if r == np.inf:
        return f.max
    g = f.geometry
    radii = _morrey_radii(g, R, cap=radii_cap)
    d = g.periodic_radii()
    counts = np.array([int(np.count_nonzero(d <= rad)) for rad in radii])
    sums = _ball_sums(f.values ** alpha, g, radii) * g.cell_volume
    if stride > 1:
        sl = (slice(None),) + (slice(None, None, stride),) * g.dim
        sums = sums[sl]
    best = sums.reshape(len(radii), -1).max(axis=1)
    meas = counts * g.cell_volume
    vals = meas ** (1.0 / r - 1.0 / alpha) * best ** (1.0 / alpha)
    return float(vals.max())


def uniformly_local_lebesgue(f: Field, r, R=1.0, stride=1):
    """Uniformly local L^r norm: sup over centers of ||f||_{L^r(B(x, R))}."""
    if r == np.inf:
        return f.max
    g = f.geometry
    d = np.unique(g.periodic_radii().ravel())
    d = d[d < R]
    rad = d[-1] if d.size else 0.0
    sums = _ball_sums(f.values ** r, g, [rad]) * g.cell_volume
    if stride > 1:
        sl = (slice(None),) + (slice(None, None, stride),) * g.dim
        sums = sums[sl]
    return float(sums.max() ** (1.0 / r))


def evaluate_norm(f: Field, spec: NormSpec):
    """Dispatch a NormSpec against a field."""
    if spec.kind == "morrey":
        return morrey_norm(f, spec.r, spec.alpha, spec.R, stride=spec.stride)
    return uniformly_local_norm(f, spec)


# ---------------------------------------------------------------------------
# axiom and integral-bound reports


def _diverging_trend(per_decade_max):
    """True when the last stretch of per-decade maxima keeps climbing."""
    v = np.asarray(per_decade_max, dtype=float)
    v = v[np.isfinite(v)]
    if v.size < 8:
        return bool(np.any(~np.isfinite(per_decade_max)))
    tail = v[-8:]
    rising = bool(np.all(np.diff(tail) > 0))
    grown = bool(tail[-1] > 10.0 * max(v[0], 1e-300))
    return (rising and grown) or bool(np.any(~np.isfinite(per_decade_max)))


def phi_axiom_report(phi: PhiSpec):
    """Empirical axiom constants for a weight function.

    Checks Phi(0) = 1 (raises on failure), reports the measured doubling
    constant on a ∈ {2^0 .. 2^60} and the measured monotone-comparison
    constants for delta in {0.1, 0.5, 1}; flags each as unbounded when the
    per-decade constants keep growing across the sampled range.
    """
    val0 = float(phi(0.0))
    if not abs(val0 - 1.0) <= 1e-9:
        raise PhiAxiomError(f"Phi(0) = {val0!r}, axiom Phi1 requires 1")
    a = 2.0 ** np.arange(0, 61)
    with np.errstate(over="ignore"):
        ratios = np.asarray(phi(a * a)) / np.asarray(phi(a))
    per_decade = [np.max(ratios[i : i + 4]) for i in range(0, 60, 4)]
    phi2_unbounded = _diverging_trend(per_decade)
    report = {
        "phi1_ok": True,
        "phi2_constant": float(np.max(ratios[np.isfinite(ratios)], initial=1.0)),
        "phi2_unbounded": bool(phi2_unbounded or np.any(~np.isfinite(ratios))),
        "phi3": {},
    }
    taus = np.geomspace(1.0, 1e30, 601)
    with np.errstate(over="ignore", divide="ignore"):
        logphi = np.log(np.asarray(phi(taus)))
    for delta in (0.1, 0.5, 1.0):
        lf = -delta * np.log(taus) + logphi
        running_min = np.minimum.accumulate(lf)
        gap = lf - running_min
        per_decade = [np.max(gap[i : i + 20]) for i in range(0, 600, 20)]
        report["phi3"][str(delta)] = {
            "C_delta": float(np.exp(np.max(gap[np.isfinite(gap)], initial=0.0))),
            "tau_delta": 1.0,
            "unbounded": bool(
                _diverging_trend(np.exp(np.minimum(per_decade, 700)))
                or np.any(~np.isfinite(gap))
            ),
        }
    report["passed"] = not report["phi2_unbounded"] and not any(
        v["unbounded"] for v in report["phi3"].values()
    )
    return report


def _panel_quad(fun, lo, hi, rel_tol=1e-10):
    from scipy.integrate import quad

    val, _ = quad(fun, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200)
    return val


def weighted_tail_integral(phi, exponent, alpha, s, lower=True, rel_tol=1e-10):
    """int_0^s tau^q Phi(1/tau)^alpha dtau (lower) or int_s^inf (upper).

    Dyadic panels toward the singular end; each panel integrated
    adaptively, stopping when a panel stops contributing.
    """
    fun = lambda t: t ** exponent * float(phi.at_inv(t)) ** alpha
    total = 0.0
    if lower:
        if exponent <= -1:
            raise ValueError("lower integral needs exponent > -1")
        hi = s
        for _ in range(400):
            lo = hi / 2.0
            part = _panel_quad(fun, lo, hi, rel_tol)
            total += part
            hi = lo
            if abs(part) < rel_tol * abs(total) * 1e-3 and _ > 4:
                break
    else:
        if exponent >= -1:
            raise ValueError("upper integral needs exponent < -1")
        lo = s
        for _ in range(400):
            hi = lo * 2.0
            part = _panel_quad(fun, lo, hi, rel_tol)
            total += part
            lo = hi
            if abs(part) < rel_tol * abs(total) * 1e-3 and _ > 4:
                break
    return total


def lemma_integral_bounds_check(phi: PhiSpec, q, alpha, s_grid=None):
    """Bounded-ratio report for the weighted power-integral bounds.

    Part (1), q > -1: ratio = int_0^s tau^q Phi(1/tau)^a / (s^{q+1} Phi(1/s)^a).
    Part (2), q < -1: same with the tail integral int_s^infinity.
    The ratio must stay bounded across the sampled decades of s.
    """
    if q == -1:
        raise ValueError("q = -1 is excluded")
    if s_grid is None:
        s_grid = np.geomspace(1e-6, 1e2, 33)
    lower = q > -1
    ratios = []
    for s in s_grid:
        val = weighted_tail_integral(phi, q, alpha, float(s), lower=lower)
        ref = s ** (q + 1) * float(phi.at_inv(s)) ** alpha
        ratios.append(val / ref)
    ratios = np.asarray(ratios)
    n_dec = max(int(np.log10(s_grid[-1] / s_grid[0])), 1)
    chunks = np.array_split(ratios, n_dec)
    per_decade = [float(np.max(c)) for c in chunks]
    return {
        "part": 1 if lower else 2,
        "q": q,
        "alpha": alpha,
        "max_ratio": float(np.max(ratios)),
        "min_ratio": float(np.min(ratios)),
        "per_decade_max": per_decade,
        "bounded": not _diverging_trend(per_decade),
        "s_lo": float(s_grid[0]),
        "s_hi": float(s_grid[-1]),
    }
