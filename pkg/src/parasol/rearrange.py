"""Decreasing rearrangement machinery for grid fields.

The rearrangement of a grid field is an exact step function: each cell is
an atom of measure h^N, so f* is piecewise constant with breakpoints at
multiples of h^N and levels equal to the distinct field values in
descending order.  The running integral of f* is kept alongside, which
makes f**, L^r norms of f*, and the convolution/product inequality checks
exact piecewise computations rather than quadratures.
"""

from dataclasses import dataclass

import numpy as np

from .fields import Field

__all__ = [
    "StepProfile",
    "rearrange",
    "rearrange_values",
    "distribution_function",
    "f_star",
    "f_star_star",
    "profile_lp_norm",
    "power_profile",
    "scale_profile",
    "convolve_fields",
    "oneil_check",
    "product_bound_check",
]


@dataclass(frozen=True)
class StepProfile:
    """Non-increasing step function on (0, infinity) with its running integral.

    breakpoints: 0 = s_0 < s_1 < ... < s_K (measures)
    levels:      v_1 > v_2 > ... > v_K > 0 (value on [s_{k-1}, s_k))
    cumulative:  C_k = int_0^{s_k} f*;  C_0 = 0

    The function is 0 on [s_K, infinity); zero values never appear as
    levels, so s_K is the measure of the support.
    """

    breakpoints: np.ndarray
    levels: np.ndarray
    cumulative: np.ndarray

    def __post_init__(self):
        b = np.ascontiguousarray(np.asarray(self.breakpoints, dtype=float))
        v = np.ascontiguousarray(np.asarray(self.levels, dtype=float))
        c = np.ascontiguousarray(np.asarray(self.cumulative, dtype=float))
        if b.ndim != 1 or v.ndim != 1 or b.size != v.size + 1 or c.size != b.size:
            raise ValueError("inconsistent profile arrays")
        if b[0] != 0.0 or np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must start at 0 and increase strictly")
        if v.size and (np.any(np.diff(v) >= 0) or v[-1] <= 0):
            raise ValueError("levels must be strictly decreasing and positive")
        for arr in (b, v, c):
            arr.setflags(write=False)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "levels", v)
        object.__setattr__(self, "cumulative", c)

    @property
    def total_measure(self):
        return float(self.breakpoints[-1])

    @property
    def max_level(self):
        return float(self.levels[0]) if self.levels.size else 0.0

    @property
    def total_integral(self):
        return float(self.cumulative[-1])

    def save_csv(self, path):
        with open(path, "w") as fh:
            fh.write("s,level,cumulative\n")
            for k in range(self.levels.size):
                fh.write(
                    f"{self.breakpoints[k + 1]!r},{self.levels[k]!r},"
                    f"{self.cumulative[k + 1]!r}\n"
                )


def _profile_from_sorted(values_desc, atom):
    """Build a StepProfile from positive values already sorted descending."""
    if values_desc.size == 0:
        z = np.zeros(1)
        return StepProfile(z, np.zeros(0), z)
    # group equal values; counts in descending-value order
    levels, counts = np.unique(values_desc[::-1], return_counts=True)
    levels = levels[::-1]
    counts = counts[::-1]
    breaks = np.concatenate([[0.0], np.cumsum(counts * atom)])
    cum = np.concatenate([[0.0], np.cumsum(levels * counts * atom)])
    return StepProfile(breaks, levels, cum)


def rearrange_values(values, atom):
    """Rearrangement of a raw value array where each entry has measure ``atom``."""
    flat = np.asarray(values, dtype=float).ravel()
    pos = flat[flat > 0]
    return _profile_from_sorted(np.sort(pos)[::-1], atom)


def rearrange(f: Field) -> StepProfile:
    """Exact non-increasing rearrangement of a grid field."""
    return rearrange_values(f.values, f.geometry.cell_volume)


def distribution_function(f: Field, lam):
    """Measure of the superlevel set {value > lam}."""
    if lam <= 0:
        raise ValueError(f"level must be positive, got {lam}")
    return f.geometry.cell_volume * int(np.count_nonzero(f.values > lam))


def f_star(profile: StepProfile, s):
    """Evaluate f* (right-continuous) at s >= 0; vectorized."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("s must be >= 0")
    if profile.levels.size == 0:
        return np.zeros(s.shape) if s.ndim else 0.0
    idx = np.searchsorted(profile.breakpoints, s, side="right") - 1
    out = np.where(
        idx >= profile.levels.size, 0.0, profile.levels[np.minimum(idx, profile.levels.size - 1)]
    )
    return out if s.ndim else float(out)


def cumulative_at(profile: StepProfile, s):
    """Running integral int_0^s f*; exact piecewise-linear evaluation."""
    s = np.asarray(s, dtype=float)
    out = np.interp(s, profile.breakpoints, profile.cumulative)
    out = np.where(s >= profile.total_measure, profile.total_integral, out)
    return out if s.ndim else float(out)


def f_star_star(profile: StepProfile, s):
    """Maximal average f**(s) = (1/s) int_0^s f*; s > 0 required."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0):
        raise ValueError("s must be positive")
    out = cumulative_at(profile, s_arr) / s_arr
    return out if s_arr.ndim else float(out)


def profile_lp_norm(profile: StepProfile, r):
    """L^r((0, infinity)) norm of f*; equals the field's L^r norm exactly."""
    if profile.levels.size == 0:
        return 0.0
    if r == np.inf:
        return profile.max_level
    widths = np.diff(profile.breakpoints)
    return float(np.sum(profile.levels ** r * widths) ** (1.0 / r))


def _rebuild_merged(breakpoints, levels):
    """Re-merge adjacent equal levels and drop an underflowed-to-zero tail
    (float maps can collide distinct levels or underflow tiny ones)."""
    widths = np.diff(breakpoints)
    pos = levels > 0
    levels, widths = levels[pos], widths[pos]
    if levels.size == 0:
        z = np.zeros(1)
        return StepProfile(z, np.zeros(0), z)
    if levels.size > 1 and np.any(np.diff(levels) >= 0):
        keep_start = np.concatenate([[True], np.diff(levels) != 0])
        group = np.cumsum(keep_start) - 1
        merged_w = np.zeros(int(group[-1]) + 1)
        np.add.at(merged_w, group, widths)
        levels = levels[keep_start]
        widths = merged_w
    breaks = np.concatenate([[0.0], np.cumsum(widths)])
    cum = np.concatenate([[0.0], np.cumsum(levels * widths)])
    return StepProfile(breaks, levels, cum)


def power_profile(profile: StepProfile, q):
    """Profile of |f|^q: same measure structure, levels raised to q."""
    if q <= 0:
        raise ValueError("power must be positive")
    if profile.levels.size == 0:
        return profile
    return _rebuild_merged(profile.breakpoints, profile.levels ** q)


def scale_profile(profile: StepProfile, k):
    """Profile of k*f for k != 0."""
    if k == 0:
        z = np.zeros(1)
        return StepProfile(z, np.zeros(0), z)
    if profile.levels.size == 0:
        return profile
    return _rebuild_merged(profile.breakpoints, abs(k) * profile.levels)


def convolve_fields(f1: Field, f2: Field) -> Field:
    """Periodic convolution (f1 * f2)(x) = sum_y f1(x-y) f2(y) h^N, via FFT."""
    if f1.geometry != f2.geometry:
        raise ValueError("fields must share a geometry")
    a = np.fft.rfftn(f1.values)
    b = np.fft.rfftn(f2.values)
    out = np.fft.irfftn(a * b, s=f1.geometry.shape) * f1.geometry.cell_volume
    # FFT rounding can produce tiny negatives on a non-negative product
    floor = -1e-12 * max(out.max(initial=0.0), 1.0)
    if out.min(initial=0.0) < floor:
        raise ArithmeticError("convolution produced significant negative values")
    return Field(f1.geometry, np.maximum(out, 0.0))


def _union_breaks(p1: StepProfile, p2: StepProfile, extra=()):
    pts = np.concatenate([p1.breakpoints, p2.breakpoints, np.asarray(extra, dtype=float)])
    pts = np.unique(pts)
    return pts[pts >= 0]


def integral_product_fstar(p1: StepProfile, p2: StepProfile, s):
    """Exact int_0^s f1*(tau) f2*(tau) dtau for scalar s > 0."""
    if s <= 0:
        raise ValueError("s must be positive")
    hi = min(s, min(p1.total_measure, p2.total_measure))
    if hi <= 0:
        return 0.0
    pts = _union_breaks(p1, p2, extra=[hi])
    pts = pts[pts <= hi]
    if pts[-1] < hi:
        pts = np.append(pts, hi)
    mids = 0.5 * (pts[:-1] + pts[1:])
    vals = f_star(p1, mids) * f_star(p2, mids)
    return float(np.sum(vals * np.diff(pts)))


def integral_fss_product_tail(p1: StepProfile, p2: StepProfile, s):
    """Exact int_s^infinity f1**(tau) f2**(tau) dtau for scalar s > 0.

    On each interval between (union) breakpoints both running integrals
    F_i are linear, F_i = c_i + m_i tau, so the integrand is
    m1 m2 + (c1 m2 + c2 m1)/tau + c1 c2 / tau^2 with a closed primitive.
    Beyond the last breakpoint both F_i are constant and the tail is
    F1 F2 / tau evaluated once.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    last = max(p1.total_measure, p2.total_measure)
    total = 0.0
    if s < last:
        pts = _union_breaks(p1, p2)
        pts = pts[(pts > s)]
        pts = np.concatenate([[s], pts[pts <= last]])
        if pts[-1] < last:
            pts = np.append(pts, last)
        a, b = pts[:-1], pts[1:]
        mids = 0.5 * (a + b)
        m1 = f_star(p1, mids)
        m2 = f_star(p2, mids)
        c1 = cumulative_at(p1, a) - m1 * a
        c2 = cumulative_at(p2, a) - m2 * a
        parts = (
            m1 * m2 * (b - a)
            + (c1 * m2 + c2 * m1) * np.log(b / a)
            + c1 * c2 * (1.0 / a - 1.0 / b)
        )
        total += float(np.sum(parts))
    tail_lo = max(s, last)
    total += p1.total_integral * p2.total_integral / tail_lo
    return total


def _check_grid(p: StepProfile, extra_profiles=()):
    """Evaluation grid for inequality checks: all breakpoints plus midpoints."""
    pts = p.breakpoints
    for q in extra_profiles:
        pts = np.union1d(pts, q.breakpoints)
    pts = pts[pts > 0]
    if pts.size == 0:
        return np.array([1.0])
    mids = np.sqrt(pts[:-1] * pts[1:]) if pts.size > 1 else np.zeros(0)
    lead = pts[0] / 2.0
    tail = pts[-1] * 2.0
    return np.unique(np.concatenate([pts, mids, [lead, tail]]))


def oneil_check(f1: Field, f2: Field, s_grid=None):
    """Check (f1 conv f2)**(s) <= int_s^inf f1** f2** on an s-grid.

    Returns a report with the worst signed violation (LHS - RHS; positive
    means the inequality failed at that s) and the scale used to judge it.
    """
    conv = convolve_fields(f1, f2)
    pc = rearrange(conv)
    p1 = rearrange(f1)
    p2 = rearrange(f2)
    if s_grid is None:
        s_grid = _check_grid(pc, (p1, p2))
    s_grid = np.asarray(s_grid, dtype=float)
    lhs = f_star_star(pc, s_grid)
    rhs = np.array([integral_fss_product_tail(p1, p2, s) for s in s_grid])
    viol = lhs - rhs
    worst = int(np.argmax(viol))
    scale = max(float(np.max(lhs, initial=0.0)), float(np.max(rhs, initial=0.0)), 1e-300)
    return {
        "max_violation": float(viol[worst]),
        "s_at_max": float(s_grid[worst]),
        "scale": scale,
        "passed": bool(viol[worst] <= 1e-10 * scale),
        "n_points": int(s_grid.size),
    }


def product_bound_check(f1: Field, f2: Field, s_grid=None):
    """Check (f1 f2)**(s) <= (1/s) int_0^s f1* f2* on an s-grid."""
    if f1.geometry != f2.geometry:
        raise ValueError("fields must share a geometry")
    prod = Field(f1.geometry, f1.values * f2.values)
    pp = rearrange(prod)
    p1 = rearrange(f1)
    p2 = rearrange(f2)
    if s_grid is None:
        s_grid = _check_grid(pp, (p1, p2))
    s_grid = np.asarray(s_grid, dtype=float)
    lhs = f_star_star(pp, s_grid)
    rhs = np.array([integral_product_fstar(p1, p2, s) for s in s_grid]) / s_grid
    viol = lhs - rhs
    worst = int(np.argmax(viol))
    scale = max(float(np.max(lhs, initial=0.0)), float(np.max(rhs, initial=0.0)), 1e-300)
    return {
        "max_violation": float(viol[worst]),
        "s_at_max": float(s_grid[worst]),
        "scale": scale,
        "passed": bool(viol[worst] <= 1e-10 * scale),
        "n_points": int(s_grid.size),
    }
