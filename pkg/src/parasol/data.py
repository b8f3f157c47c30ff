"""Parameter-regime classification and singular initial-data families.

The (N, p, q) plane splits into six regimes by comparing (q+1)/(pq-1)
with N/2 and q with 1+2/N.  Each regime has a borderline radial profile
(a power or power-log singularity supported in the unit ball) such that
slightly stronger singularities admit no solutions; those generators
live here, together with the construction that turns a weight Psi into
the weight Phi matched to a given borderline profile.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .fields import Field, GridGeometry, sample_radial
from .norms import PhiSpec, phi_axiom_report, phi_identity

__all__ = [
    "CaseLabel",
    "DataFamily",
    "classify_case",
    "make_data",
    "data_admission_report",
    "build_phi_from_psi",
    "PowerLogProfile",
    "h_log_power",
]

_REL_TOL = 1e-12


@dataclass(frozen=True)
class CaseLabel:
    label: str
    ratio: float  # (q+1)/(pq-1)
    half_dim: float  # N/2
    q: float
    fujita: float  # 1 + 2/N


def classify_case(N, p, q):
    """Classify (N, p, q) into the unique regime A..F."""
    if not (0 < p <= q):
        raise ValueError(f"need 0 < p <= q, got p={p}, q={q}")
    if p * q <= 1:
        raise ValueError(f"need pq > 1, got pq={p * q}")
    ratio = (q + 1.0) / (p * q - 1.0)
    half = N / 2.0
    fujita = 1.0 + 2.0 / N
    if np.isclose(ratio, half, rtol=_REL_TOL, atol=0.0):
        label = "C" if np.isclose(p, q, rtol=_REL_TOL, atol=0.0) else "B"
    elif ratio < half:
        label = "A"
    else:
        if np.isclose(q, fujita, rtol=_REL_TOL, atol=0.0):
            label = "E"
        elif q > fujita:
            label = "D"
        else:
            label = "F"
    return CaseLabel(label, ratio, half, float(q), fujita)


@dataclass(frozen=True)
class PowerLogProfile:
    """c * r^(-power) * log(e + 1/r)^(-log_power) on r < cutoff, else 0."""

    amplitude: float
    power: float
    log_power: float = 0.0
    cutoff: float = 1.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            vals = np.where(
                (r > 0) & (r < self.cutoff),
                self.amplitude
                * r ** (-self.power)
                * np.log(np.e + 1.0 / np.maximum(r, 1e-300)) ** (-self.log_power),
                0.0,
            )
        return vals

    def radial_integral(self, x):
        """int_0^x profile(r) dr, accurate to ~1e-12 relative.

        Pure powers use the antiderivative.  The borderline power = 1
        case substitutes u = log(e + 1/r), giving the finite integral
        int u^-b e^u/(e^u - e) du plus the exact power tail u^(1-b)/(b-1)
        past u = 50 where e^u/(e^u - e) is 1 to machine precision.
        """
        x = min(x, self.cutoff)
        if x <= 0:
            return 0.0
        c, g, b = self.amplitude, self.power, self.log_power
        if b == 0.0:
            if g >= 1.0:
                raise ValueError("power >= 1 is not integrable in 1D")
            return c * x ** (1.0 - g) / (1.0 - g)
        if abs(g - 1.0) < 1e-12:
            if b <= 1.0:
                raise ValueError("r^-1 log^-b needs b > 1 to be integrable in 1D")
            u0 = np.log(np.e + 1.0 / x)
            hi = 50.0
            val = 0.0
            if u0 < hi:
                val, _ = quad(
                    lambda u: u ** (-b) * np.exp(u) / (np.exp(u) - np.e),
                    u0,
                    hi,
                    epsabs=0.0,
                    epsrel=1e-12,
                    limit=400,
                )
            else:
                hi = u0
            return c * (val + hi ** (1.0 - b) / (b - 1.0))
        val, _ = quad(
            lambda r: float(self(np.asarray(r))), 0.0, x, epsabs=0.0, epsrel=1e-12, limit=400
        )
        return val


def h_log_power(kappa):
    """h(r) = log(e + 1/r)^(-kappa): positive, increasing on (0, 1], h(1) finite."""

    def h(r):
        r = np.asarray(r, dtype=float)
        return np.log(np.e + 1.0 / np.maximum(r, 1e-300)) ** (-kappa)

    h.kappa = kappa
    return h


def _check_h_monotone(h, require_power_decrease=None, n_points=10_000):
    """Numeric scan of the shape constraints on a built-in h."""
    r = np.geomspace(1e-12, 1.0, n_points)
    vals = h(r)
    if np.any(vals <= 0):
        raise ValueError("h must be positive on (0, 1]")
    if np.any(np.diff(vals) < -1e-15 * np.max(vals)):
        raise ValueError("h must be non-decreasing on (0, 1]")
    if require_power_decrease is not None:
        eps = require_power_decrease
        shifted = r ** (-eps) * vals
        if np.any(np.diff(shifted) > 1e-12 * np.max(shifted)):
            raise ValueError(f"r^-{eps} h(r) must be decreasing on (0, 1]")


@dataclass(frozen=True)
class DataFamily:
    """Initial-data generator for one regime.

    c1, c2 scale mu and nu (for regimes D/E/F the second component, and
    for F both, are bumps of the given uniformly-local mass).  h_kappa
    parametrizes the built-in h(r) = log(e + 1/r)^(-kappa) used in
    regimes D and E.  nu_shape chooses between a near-Dirac single-cell
    bump and a uniform bump on the unit ball.
    """

    case: str
    c1: float = 1.0
    c2: float = 1.0
    h_kappa: float = 2.0
    nu_mass: float = 1.0
    nu_shape: str = "ball"
    eps_monotone: float = 0.01

    def __post_init__(self):
        if self.case not in "ABCDEF" or len(self.case) != 1:
            raise ValueError(f"unknown case {self.case!r}")
        if self.nu_shape not in ("ball", "cell"):
            raise ValueError("nu_shape must be 'ball' or 'cell'")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("amplitudes must be non-negative")


def _bump(geometry: GridGeometry, mass, shape):
    """Non-negative field of prescribed total mass, near-Dirac or unit-ball."""
    vals = np.zeros(geometry.shape)
    if mass > 0:
        if shape == "cell":
            idx = np.unravel_index(int(np.argmin(geometry.radii())), geometry.shape)
            vals[idx] = mass / geometry.cell_volume
        else:
            inside = geometry.radii() < 1.0
            vals[inside] = mass / (int(inside.sum()) * geometry.cell_volume)
    return Field(geometry, vals)


def _sample(profile: PowerLogProfile, geometry):
    if profile.amplitude == 0.0:
        return Field(geometry, np.zeros(geometry.shape))
    integral = profile.radial_integral if geometry.dim == 1 else None
    if profile.power >= geometry.dim:
        if profile.log_power <= 1.0:
            raise ValueError(
                f"profile r^-{profile.power} log^-{profile.log_power} is not "
                f"locally integrable in dimension {geometry.dim} "
                f"(needs power < N, or power = N with log exponent > 1)"
            )
        # borderline r^-N with integrable log correction, validated above
        return sample_radial(
            geometry, profile, radial_integral=integral, assume_integrable=True
        )
    return sample_radial(
        geometry, profile, radial_integral=integral, singular_exponent=profile.power
    )


def make_data(family: DataFamily, params, geometry: GridGeometry):
    """Build the (mu, nu) pair of a data family on a grid.

    params carries (N, p, q); its dimension must match the geometry.
    """
    p, q = params.p, params.q
    pq1 = p * q - 1.0
    N = geometry.dim
    if params.N != N:
        raise ValueError("params dimension does not match geometry")
    case = family.case
    if case != classify_case(N, p, q).label:
        raise ValueError(
            f"family case {case} does not match classify_case(N={N}, p={p}, q={q})"
        )
    if case == "A":
        mu = _sample(PowerLogProfile(family.c1, 2.0 * (p + 1.0) / pq1), geometry)
        nu = _sample(PowerLogProfile(family.c2, 2.0 * (q + 1.0) / pq1), geometry)
    elif case == "B":
        mu = _sample(
            PowerLogProfile(family.c1, 2.0 * (p + 1.0) / pq1, p / pq1), geometry
        )
        nu = _sample(
            PowerLogProfile(family.c2, float(N), 1.0 / pq1 + 1.0), geometry
        )
    elif case == "C":
        prof = lambda c: PowerLogProfile(c, float(N), N / 2.0 + 1.0)
        mu = _sample(prof(family.c1), geometry)
        nu = _sample(prof(family.c2), geometry)
    elif case == "D":
        h = h_log_power(family.h_kappa)
        _check_h_monotone(h, require_power_decrease=family.eps_monotone)
        mu = _sample(
            PowerLogProfile(family.c1, (N + 2.0) / q, family.h_kappa), geometry
        )
        nu = _bump(geometry, family.c2 * family.nu_mass, family.nu_shape)
    elif case == "E":
        h = h_log_power(family.h_kappa)
        _check_h_monotone(h)
        mu = _sample(PowerLogProfile(family.c1, float(N), family.h_kappa), geometry)
        nu = _bump(geometry, family.c2 * family.nu_mass, family.nu_shape)
    else:  # F
        mu = _bump(geometry, family.c1 * family.nu_mass, family.nu_shape)
        nu = _bump(geometry, family.c2 * family.nu_mass, family.nu_shape)
    return mu, nu


def data_admission_report(family: DataFamily, params):
    """Integral admission criteria for regimes D and E.

    D: int_0^1 h(tau)^q / tau dtau must converge (for the built-in h this
    is kappa*q > 1); E: the iterated integral must converge
    ((kappa-1)*q > 1).  Divergence is reported as predicted nonexistence,
    not an error.
    """
    q = params.q
    kap = family.h_kappa
    out = {"case": family.case, "h_kappa": kap}
    if family.case == "D":
        out["criterion"] = "int_0^1 h^q / tau dtau < inf"
        out["admissible"] = bool(kap * q > 1.0)
    elif family.case == "E":
        out["criterion"] = "int_0^1 (int_0^r h/tau dtau)^q / r dr < inf"
        out["admissible"] = bool(kap > 1.0 and (kap - 1.0) * q > 1.0)
    else:
        out["criterion"] = "none"
        out["admissible"] = True
    if not out["admissible"]:
        out["note"] = "paper predicts nonexistence for this h"
    return out


def phi_integrability_check(phi: PhiSpec, q, rel_tol=1e-8):
    """Check int_0^1 s^-1 Phi(1/s)^-q ds < infinity.

    Substituting u = log(1/s) turns this into int_0^inf Phi(e^u)^-q du;
    dyadic panels in u detect convergence (panel sums must decay).
    """
    if phi.family == "log_power":
        finite = phi.power * q > 1.0
    else:
        finite = None
    total = 0.0
    lo = 0.0
    hi = 1.0
    parts = []
    for _ in range(60):
        part, _err = quad(
            lambda u: float(phi.at_exp(u)) ** (-q),
            lo,
            hi,
            epsabs=0.0,
            epsrel=rel_tol,
            limit=200,
        )
        parts.append(part)
        total += part
        lo, hi = hi, hi * 2.0
        if part < 1e-12 * total:
            break
    # geometric-decay heuristic when no closed form is available
    if finite is None:
        tail_ratio = parts[-1] / max(parts[-2], 1e-300) if len(parts) > 1 else 1.0
        finite = tail_ratio < 0.9
    return {"finite": bool(finite), "partial_value": float(total)}


def build_phi_from_psi(psi: PhiSpec, auto_rescale=False, rel_tol=1e-8):
    """Weight matched to a borderline profile with shape Psi.

    Phi(s) = (int_0^{1/s} tau^-1 Psi(1/tau)^-1 1_{(0,1)}(tau) dtau)^-1,
    normalized so the full integral over (0,1) equals 1; Phi = 1 on [0, 1].
    Works in the variable u = log(1/tau): the tail T(w) = int_w^inf
    Psi(e^u)^-1 du is tabulated on [0, 700] plus dyadic panels beyond,
    and Phi(s) = 1/T(log s) is served through monotone interpolation.
    Returns (PhiSpec, report) with the axiom report attached.
    """

    def inv_psi_at_exp(u):
        return 1.0 / float(psi.at_exp(u))

    # tail beyond u = 700, dyadic panels; detect divergence on the way
    tail = 0.0
    lo = 700.0
    parts = []
    for _ in range(80):
        hi = lo * 2.0
        part, _err = quad(inv_psi_at_exp, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200)
        parts.append(part)
        tail += part
        lo = hi
        if part < 1e-14 * max(tail, 1e-300):
            break
    else:
        part = parts[-1]
    if len(parts) >= 2 and parts[-1] >= 0.9 * parts[-2] and parts[-1] > 1e-13:
        raise ValueError("normalization integral diverges for this Psi")

    w_grid = np.concatenate([np.linspace(0.0, 20.0, 801), np.geomspace(20.5, 700.0, 400)])
    panels = np.empty(w_grid.size - 1)
    for i in range(w_grid.size - 1):
        panels[i], _ = quad(
            inv_psi_at_exp, w_grid[i], w_grid[i + 1], epsabs=0.0, epsrel=rel_tol, limit=100
        )
    T = np.empty(w_grid.size)
    T[-1] = tail
    T[:-1] = tail + np.cumsum(panels[::-1])[::-1]
    norm = T[0]  # = int_0^1 tau^-1 Psi(1/tau)^-1 dtau
    if abs(norm - 1.0) > 1e-8:
        if not auto_rescale:
            raise ValueError(
                f"Psi normalization integral is {norm!r}, not 1 "
                "(pass auto_rescale=True to rescale Psi)"
            )
        T = T / norm
    logT = PchipInterpolator(w_grid, np.log(T))

    def phi_fun(tau):
        tau = np.asarray(tau, dtype=float)
        with np.errstate(divide="ignore"):
            w = np.where(tau > 1.0, np.log(np.minimum(tau, 1e300)), 0.0)
        out = np.where(tau <= 1.0, 1.0, np.exp(-logT(np.minimum(w, 700.0))))
        return out

    def phi_fun_log(u):
        u = np.asarray(u, dtype=float)
        return np.where(u <= 0.0, 1.0, np.exp(-logT(np.minimum(u, 700.0))))

    phi = PhiSpec(
        "derived", func=phi_fun, func_log=phi_fun_log, label=f"derived[{psi.label}]"
    )
    report = phi_axiom_report(phi)
    report["normalization"] = float(norm)
    report["rescaled"] = bool(abs(norm - 1.0) > 1e-8)
    return phi, report
