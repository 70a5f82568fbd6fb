"""Summation operators built on a Takenaka-Malmquist basis.

Fourier data with respect to the extended system gives partial sums and
Cesaro means.  The positive summation method rests on the kernel

    F_n(t, z) = |B_n'(z)|^{-1} * |(B_n(t) - B_n(z)) / (t - z)|^2,

which is nonnegative with unit mean in t for every boundary z.  The
induced operator

    sigma_rusak(f)(z) = (1/2pi) * integral f(t) F_n(t, z) |dt|

agrees on the circle with the holomorphic expression

    sigma_positive(f)(z) = S_n(f)(z) - (B_n(z)/B_n'(z)) S_n'(f)(z)

whenever f extends holomorphically.  The weighted approximation error

    delta(f) = (B_n'/B_n) (f - sigma_positive(f))

is holomorphic in the disc, interpolates f' at the basis poles, and obeys
the first-order bound |delta(f)(z) - f'(z)| <= |B_n(z)| / (1 - |z|^2) for
Cauchy transforms of unit densities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from tmfejer.blaschke import (
    ZERO_SWITCH,
    PointSequence,
    _flatten,
    _restore,
    eval_blaschke,
    second_derivative,
)
from tmfejer.quadrature import BoundaryGridFunction, default_resolution
from tmfejer.tm_basis import (
    CIRCLE_TOL,
    ExtendedOffCircle,
    TMBasis,
    phi_jet,
    phi_values,
)

__all__ = [
    "CRITICAL_TOL",
    "NEAR_BOUNDARY_MARGIN",
    "SAFE_RATIO_FLOOR",
    "CriticalPoint",
    "NearBoundary",
    "AnalyticTestFunction",
    "CoefficientVector",
    "coefficients",
    "coefficients_of",
    "partial_sum",
    "cesaro_mean",
    "fejer_kernel",
    "fejer_kernel_angular",
    "sigma_positive",
    "sigma_rusak",
    "delta",
    "extremal_voronovskaya",
]

# sigma_positive refuses points where B_n' vanishes but B_n does not.
CRITICAL_TOL = 1e-12
# delta is restricted to |z| <= 1 - NEAR_BOUNDARY_MARGIN.
NEAR_BOUNDARY_MARGIN = 1e-9
# Below this floor on |B_n| or |B_n'| delta switches to its integral form.
SAFE_RATIO_FLOOR = 1e-6
# Kernel patch bands around the diagonal.
_DIAG_FLOOR = 1e-12

_KINDS = ("rational", "cauchy_transform", "schur", "blaschke_multiple")

_CHUNK = 256


class CriticalPoint(ArithmeticError):
    """sigma_positive evaluated at a zero of B_n' that is not a zero of B_n."""


class NearBoundary(ValueError):
    """delta evaluated too close to the unit circle."""


@dataclass(frozen=True, eq=False)
class AnalyticTestFunction:
    """A test function on the closed disc given by value/derivative callables.

    `kind` tags how the member was built: 'rational', 'cauchy_transform'
    (with the generating boundary density attached), 'schur' (sup norm at
    most one on the disc) or 'blaschke_multiple'.
    """

    value: Callable
    derivative: Callable
    kind: str
    density: BoundaryGridFunction | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "cauchy_transform" and self.density is None:
            raise ValueError("cauchy_transform members carry their boundary density")


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Fourier data <f, phi_k> for k in [-(order-1), order-1]."""

    entries: dict
    order: int

    def __getitem__(self, k: int) -> complex:
        return self.entries[k]

    def __contains__(self, k: int) -> bool:
        return k in self.entries

    def positive(self) -> np.ndarray:
        return np.asarray([self.entries[k] for k in range(self.order)], dtype=np.complex128)


def coefficients(
    f: BoundaryGridFunction, basis: TMBasis, include_negative: bool = False
) -> CoefficientVector:
    """Grid quadrature of <f, phi_k> = (1/2pi) integral f(t) conj(phi_k(t)) |dt|.

    Negative indices use conj(phi_{-m}(t)) = t * phi_{m-1}(t).  The grid
    must resolve the basis; stated tolerances elsewhere assume at least
    default_resolution(order) samples.
    """
    n = basis.order
    if f.resolution < 16 * max(n, 1):
        raise ValueError(
            f"resolution {f.resolution} too coarse for order {n}; need >= {16 * max(n, 1)}"
        )
    entries: dict = {}
    if n:
        pts = f.points
        vals = phi_values(basis, pts)
        for k in range(n):
            entries[k] = complex((f.samples * np.conj(vals[k])).mean())
        if include_negative:
            for m in range(1, n):
                entries[-m] = complex((f.samples * pts * vals[m - 1]).mean())
    return CoefficientVector(entries, n)


def coefficients_of(
    f: AnalyticTestFunction,
    basis: TMBasis,
    resolution: int | None = None,
    include_negative: bool = False,
) -> CoefficientVector:
    """Coefficients of an analytic member sampled on the default boundary grid.

    Cauchy-transform members are never sampled on the circle: the Riesz
    projection is self-adjoint against the basis, so <K(mu), phi_k> equals
    <mu, phi_k> and the stored density serves as the boundary data.
    """
    if f.kind == "cauchy_transform":
        return coefficients(f.density, basis, include_negative)
    res = resolution or default_resolution(basis.order)
    grid = BoundaryGridFunction.from_callable(f.value, res)
    return coefficients(grid, basis, include_negative)


def _require_circle(zf: np.ndarray, what: str) -> None:
    if zf.size and np.abs(np.abs(zf) - 1.0).max() > CIRCLE_TOL:
        raise ExtendedOffCircle(f"{what} requires points on the unit circle")


def partial_sum(
    coeffs: CoefficientVector, basis: TMBasis, m: int, z, symmetric: bool = False
):
    """S_m(f)(z) = sum_{k<m} c_k phi_k(z); symmetric form adds k in (-m, 0).

    The symmetric variant involves the boundary-only functions, so it
    requires |z| = 1 whenever m > 1.
    """
    if not 0 <= m <= min(basis.order, coeffs.order):
        raise ValueError(f"partial sum length {m} outside [0, {min(basis.order, coeffs.order)}]")
    zf, shape, scalar = _flatten(z)
    out = np.zeros_like(zf)
    if m:
        vals = phi_values(basis, zf)[:m]
        c = np.asarray([coeffs[k] for k in range(m)], dtype=np.complex128)
        out = (c[:, None] * vals).sum(axis=0)
        if symmetric and m > 1:
            _require_circle(zf, "the symmetric partial sum")
            for k in range(1, m):
                out += coeffs[-k] * np.conj(zf * vals[k - 1])
    return _restore(out, shape, scalar)


def cesaro_mean(coeffs: CoefficientVector, basis: TMBasis, n: int, t):
    """Cesaro mean sum_{|k|<n} (1 - |k|/n) c_k phi_k(t) on the circle."""
    if not 1 <= n <= min(basis.order, coeffs.order):
        raise ValueError(f"cesaro order {n} outside [1, {min(basis.order, coeffs.order)}]")
    if n > 1 and -1 not in coeffs:
        raise ValueError("cesaro_mean needs coefficients computed with include_negative")
    tf, shape, scalar = _flatten(t)
    _require_circle(tf, "cesaro_mean")
    vals = phi_values(basis, tf)[:n]
    out = np.zeros_like(tf)
    for k in range(n):
        out += (1.0 - k / n) * coeffs[k] * vals[k]
    for k in range(1, n):
        out += (1.0 - k / n) * coeffs[-k] * np.conj(tf * vals[k - 1])
    return _restore(out, shape, scalar)


def _kernel_values(
    sequence: PointSequence,
    n: int,
    bt: np.ndarray,
    bz: np.ndarray,
    bpz: np.ndarray,
    zf: np.ndarray,
    diff: np.ndarray,
) -> np.ndarray:
    """Elementwise kernel from precomputed Blaschke data.

    All arrays share one shape; `diff` is t - z.  Within ZERO_SWITCH of the
    diagonal the limit |B_n'(z)| is used, with a first-order correction via
    B_n'' on the band _DIAG_FLOOR < |t - z| < ZERO_SWITCH.
    """
    ad = np.abs(diff)
    far = ad >= ZERO_SWITCH
    absbp = np.abs(bpz)
    safe = np.where(far, diff, 1.0)
    q = (bt - bz) / safe
    vals = np.abs(q) ** 2 / absbp
    near_vals = np.broadcast_to(absbp, diff.shape).copy()
    mid = ~far & (ad > _DIAG_FLOOR)
    if mid.any():
        idx = np.nonzero(mid)
        zmid = np.broadcast_to(zf, diff.shape)[idx]
        bpp = np.asarray(second_derivative(sequence, n, zmid)).reshape(-1)
        bp_mid = np.broadcast_to(bpz, diff.shape)[idx]
        corr = (diff[idx] * bpp * np.conj(bp_mid)).real / np.abs(bp_mid)
        near_vals[idx] = near_vals[idx] + corr
    return np.where(far, vals, near_vals)


def fejer_kernel(basis: TMBasis, t, z):
    """F_n(t, z) for boundary points, broadcasting t against z elementwise.

    Nonnegative, and (1/2pi) integral F_n(t, z) |dt| = 1 for every z on the
    circle.  On the diagonal the value is |B_n'(z)|, the diagonal of the
    Christoffel-Darboux kernel.
    """
    n = basis.order
    if n == 0:
        raise ValueError("the kernel needs order >= 1")
    tb, zb = np.broadcast_arrays(
        np.asarray(t, dtype=np.complex128), np.asarray(z, dtype=np.complex128)
    )
    shape = tb.shape
    scalar = tb.ndim == 0
    tf = tb.reshape(-1)
    zf = zb.reshape(-1)
    seq = basis.sequence
    bt = eval_blaschke(seq, n, tf).value
    be = eval_blaschke(seq, n, zf)
    out = _kernel_values(seq, n, bt, be.value, be.derivative, zf, tf - zf)
    return _restore(out, shape, scalar)


def fejer_kernel_angular(basis: TMBasis, x, y):
    """Kernel in angular form: sin^2(phase(x,y)) / (2 gamma_n(x) sin^2((y-x)/2)).

    Here phase(x, y) is the integral of gamma_n over [x, y].  Equals
    fejer_kernel at t = e^{iy}, z = e^{ix}.
    """
    from tmfejer.blaschke import boundary_phase, gamma_density

    n = basis.order
    if n == 0:
        raise ValueError("the kernel needs order >= 1")
    xb, yb = np.broadcast_arrays(
        np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
    )
    shape = xb.shape
    scalar = xb.ndim == 0
    xf = xb.reshape(-1)
    yf = yb.reshape(-1)
    g = np.asarray(gamma_density(basis.sequence, n, xf)).reshape(-1)
    ph = np.asarray(boundary_phase(basis.sequence, n, xf, yf)).reshape(-1)
    s2 = np.sin(0.5 * (yf - xf)) ** 2
    tiny = s2 < (0.5 * ZERO_SWITCH) ** 2
    s2_safe = np.where(tiny, 1.0, s2)
    out = np.sin(ph) ** 2 / s2_safe / (2.0 * g)
    out = np.where(tiny, 2.0 * g, out)
    return _restore(out, shape, scalar)


def sigma_positive(
    f: AnalyticTestFunction,
    basis: TMBasis,
    z,
    coeffs: CoefficientVector | None = None,
    resolution: int | None = None,
):
    """S_n(f)(z) - (B_n(z)/B_n'(z)) S_n'(f)(z); the identity for order zero.

    S_n' is assembled from the exact rational derivatives of the basis
    functions, never from finite differences.  At a multiple interpolation
    node both B_n and B_n' vanish and the ratio tends to zero, so the value
    degenerates to S_n(z) there; at a genuine critical point of B_n the
    operator has a pole and CriticalPoint is raised.
    """
    n = basis.order
    zf, shape, scalar = _flatten(z)
    if n == 0:
        vals = np.asarray(f.value(zf), dtype=np.complex128).reshape(zf.shape)
        return _restore(vals, shape, scalar)
    if coeffs is None:
        coeffs = coefficients_of(f, basis, resolution)
    c = coeffs.positive()
    vals, ders = phi_jet(basis, zf)
    s = (c[:, None] * vals.reshape(n, -1)).sum(axis=0)
    sp = (c[:, None] * ders.reshape(n, -1)).sum(axis=0)
    be = eval_blaschke(basis.sequence, n, zf)
    bz = np.asarray(be.value).reshape(-1)
    bpz = np.asarray(be.derivative).reshape(-1)
    absb = np.abs(bz)
    absbp = np.abs(bpz)
    critical = (absbp < CRITICAL_TOL) & (absb >= CRITICAL_TOL)
    if critical.any():
        raise CriticalPoint("B_n' vanishes at an evaluation point where B_n does not")
    node = (absbp < CRITICAL_TOL) & (absb < CRITICAL_TOL)
    ratio = np.where(node, 0.0, bz / np.where(node, 1.0, bpz))
    out = s - ratio * sp
    return _restore(out, shape, scalar)


def sigma_rusak(f: BoundaryGridFunction, basis: TMBasis, z):
    """Kernel quadrature (1/2pi) integral f(t) F_n(t, z) |dt| over f's own grid.

    Defined for boundary data and boundary evaluation points; order zero
    returns the sample nearest to z.  Positive and norm-one: nonnegative
    data gives nonnegative values and the sup never exceeds the data sup
    beyond quadrature error.
    """
    zf, shape, scalar = _flatten(z)
    _require_circle(zf, "sigma_rusak")
    n = basis.order
    npts = f.resolution
    if n == 0:
        idx = np.rint(np.angle(zf) / (2.0 * np.pi / npts)).astype(int) % npts
        return _restore(f.samples[idx], shape, scalar)
    seq = basis.sequence
    tpts = f.points
    bt = eval_blaschke(seq, n, tpts).value
    out = np.empty(zf.shape, dtype=np.complex128)
    for lo in range(0, zf.size, _CHUNK):
        zc = zf[lo : lo + _CHUNK]
        be = eval_blaschke(seq, n, zc)
        bz = np.asarray(be.value).reshape(-1, 1)
        bpz = np.asarray(be.derivative).reshape(-1, 1)
        diff = tpts[None, :] - zc[:, None]
        rows = _kernel_values(seq, n, bt[None, :], bz, bpz, zc[:, None], diff)
        out[lo : lo + _CHUNK] = (f.samples[None, :] * rows).mean(axis=1)
    return _restore(out, shape, scalar)


def _cauchy_weighted_integral(
    sequence: PointSequence, n: int, dens: BoundaryGridFunction, zf: np.ndarray
) -> np.ndarray:
    """(1/2pi) integral conj((t - z)/(1 - conj(t) z)) conj(B_n(t)) mu(t) / |1 - conj(t) z|^2 |dt|."""
    tpts = dens.points
    bt = eval_blaschke(sequence, n, tpts).value
    ker = np.conj(bt) * dens.samples
    out = np.empty(zf.shape, dtype=np.complex128)
    ct = np.conj(tpts)[None, :]
    for lo in range(0, zf.size, _CHUNK):
        zc = zf[lo : lo + _CHUNK][:, None]
        g = 1.0 - ct * zc
        w = (ct - np.conj(zc)) / g
        out[lo : lo + _CHUNK] = (w * ker[None, :] / np.abs(g) ** 2).mean(axis=1)
    return out


def delta(
    f: AnalyticTestFunction,
    basis: TMBasis,
    z,
    coeffs: CoefficientVector | None = None,
    resolution: int | None = None,
):
    """Weighted error (B_n'/B_n)(f - sigma_positive(f)) inside the disc.

    The function is holomorphic despite the apparent poles: f - sigma_positive(f)
    vanishes at the zeros of B_n.  Cauchy-transform members are evaluated
    through the equivalent integral form

        delta(f)(z) = f'(z) - B_n(z) * (1/2pi) integral conj((t-z)/(1-conj(t)z))
                      * conj(B_n(t)) mu(t) / |1 - conj(t) z|^2 |dt|,

    which is also used as the removable-singularity fallback for other
    kinds whenever |B_n| or |B_n'| drops below SAFE_RATIO_FLOOR.  Order
    zero gives identically zero.  Interpolates f' at every basis pole.
    """
    zf, shape, scalar = _flatten(z)
    if zf.size and np.abs(zf).max() > 1.0 - NEAR_BOUNDARY_MARGIN:
        raise NearBoundary(f"delta requires |z| <= 1 - {NEAR_BOUNDARY_MARGIN}")
    n = basis.order
    if n == 0:
        return _restore(np.zeros_like(zf), shape, scalar)
    be = eval_blaschke(basis.sequence, n, zf)
    bz = np.asarray(be.value).reshape(-1)
    bpz = np.asarray(be.derivative).reshape(-1)
    out = np.empty_like(zf)
    if f.kind == "cauchy_transform":
        algebraic = np.zeros(zf.shape, dtype=bool)
    else:
        algebraic = (np.abs(bz) >= SAFE_RATIO_FLOOR) & (np.abs(bpz) >= SAFE_RATIO_FLOOR)
    if algebraic.any():
        za = zf[algebraic]
        sp = np.asarray(
            sigma_positive(f, basis, za, coeffs=coeffs, resolution=resolution)
        ).reshape(-1)
        fv = np.asarray(f.value(za), dtype=np.complex128).reshape(-1)
        out[algebraic] = bpz[algebraic] / bz[algebraic] * (fv - sp)
    rest = ~algebraic
    if rest.any():
        if f.kind == "cauchy_transform":
            dens = f.density
        else:
            dens = BoundaryGridFunction.from_callable(
                f.value, resolution or default_resolution(n)
            )
        zi = zf[rest]
        integral = _cauchy_weighted_integral(basis.sequence, n, dens, zi)
        fp = np.asarray(f.derivative(zi), dtype=np.complex128).reshape(-1)
        out[rest] = fp - bz[rest] * integral
    return _restore(out, shape, scalar)


def extremal_voronovskaya(basis: TMBasis, z, theta: float = 0.0) -> AnalyticTestFunction:
    """Unit density attaining the first-order error bound at the point z.

    Returns f*(w) = e^{i theta} B_n(w) (w - z)/(1 - w conj(z)) as a
    Cauchy-transform member: the attached density is the boundary trace of
    f*, while value and derivative use the explicit product formula.  For
    this member |delta(f*)(z) - f*'(z)| equals |B_n(z)|/(1 - |z|^2).
    """
    z0 = complex(z)
    if abs(z0) >= 1.0:
        raise ValueError("the extremal construction needs |z| < 1")
    seq = basis.sequence
    n = basis.order
    phase = complex(np.exp(1j * theta))

    def value(w):
        b = eval_blaschke(seq, n, w).value
        wa = np.asarray(w, dtype=np.complex128)
        return phase * b * (wa - z0) / (1.0 - wa * np.conj(z0))

    def derivative(w):
        be = eval_blaschke(seq, n, w)
        wa = np.asarray(w, dtype=np.complex128)
        mob = (wa - z0) / (1.0 - wa * np.conj(z0))
        mobp = (1.0 - abs(z0) ** 2) / (1.0 - wa * np.conj(z0)) ** 2
        return phase * (be.derivative * mob + be.value * mobp)

    dens = BoundaryGridFunction.from_callable(value, default_resolution(n))
    return AnalyticTestFunction(
        value=value,
        derivative=derivative,
        kind="cauchy_transform",
        density=dens,
        label=f"extremal@{z0:.3g}",
    )
