"""Finite Blaschke products and their boundary data.

A point sequence a = (a_0, a_1, ...) in the open unit disc generates the
products

    B_0(z) = 1,    B_n(z) = prod_{j<n} (z - a_j) / (1 - z*conj(a_j)),

which are unimodular on the unit circle.  This module evaluates B_n and
B_n', the boundary modulus

    |B_n'(e^{ix})| = sum_{k<n} (1 - |a_k|^2) / |1 - e^{-ix} a_k|^2

(a partial Frostman sum), the density gamma_n = |B_n'|/2, and the
continuous boundary phase of B_n.  Every evaluator accepts scalars or
numpy arrays of points and returns matching shapes.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "MODULUS_MARGIN",
    "POLE_TOL",
    "ZERO_SWITCH",
    "PoleProximity",
    "PointSequence",
    "BlaschkeEval",
    "eval_blaschke",
    "second_derivative",
    "boundary_derivative_modulus",
    "gamma_density",
    "boundary_phase",
]

# Construction rejects |a_k| >= 1 - MODULUS_MARGIN.
MODULUS_MARGIN = 1e-12
# Evaluation rejects points with |1 - z*conj(a_j)| below POLE_TOL.
POLE_TOL = 1e-12
# Derivative switches to the explicit product rule within ZERO_SWITCH of a zero.
ZERO_SWITCH = 1e-8


class PoleProximity(ArithmeticError):
    """Evaluation point too close to a pole 1/conj(a_j) of the product."""


from dataclasses import dataclass


@dataclass(frozen=True)
class PointSequence:
    """Ordered zeros a_k in the open unit disc; multiplicity by repetition."""

    points: tuple[complex, ...]

    def __post_init__(self) -> None:
        pts = tuple(complex(p) for p in self.points)
        for j, p in enumerate(pts):
            if abs(p) >= 1.0 - MODULUS_MARGIN:
                raise ValueError(
                    f"point {j} has modulus {abs(p)}; require |a_k| < 1 - {MODULUS_MARGIN}"
                )
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, k: int) -> complex:
        return self.points[k]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class BlaschkeEval:
    """Value and derivative of B_n at one point or an array of points."""

    value: complex | np.ndarray
    derivative: complex | np.ndarray
    degree: int


def _flatten(z):
    arr = np.asarray(z, dtype=np.complex128)
    return arr.reshape(-1), arr.shape, arr.ndim == 0


def _restore(flat: np.ndarray, shape: tuple, scalar: bool):
    if scalar:
        return flat.reshape(())[()]
    return flat.reshape(shape)


def _check_order(sequence: PointSequence, n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0 or n > len(sequence):
        raise ValueError(f"order {n!r} outside [0, {len(sequence)}]")


def _product_rule_derivative(fac: np.ndarray, w: np.ndarray, den: np.ndarray) -> np.ndarray:
    # sum_j f_j'(z) * prod_{i<j} f_i * prod_{i>j} f_i with f_j' = w_j / den_j^2.
    # Exact at the zeros a_j: every term but one carries a vanishing factor.
    n = fac.shape[0]
    pre = np.ones_like(fac)
    suf = np.ones_like(fac)
    if n > 1:
        pre[1:] = np.cumprod(fac[:-1], axis=0)
        suf[:-1] = np.cumprod(fac[::-1], axis=0)[-2::-1]
    return (w / den**2 * pre * suf).sum(axis=0)


def eval_blaschke(sequence: PointSequence, n: int, z) -> BlaschkeEval:
    """Evaluate B_n and B_n' at z (scalar or array).

    The derivative uses the logarithmic form

        B_n'(z) = B_n(z) * sum_{j<n} (1 - |a_j|^2) / ((z - a_j)(1 - z*conj(a_j)))

    and switches to an explicit product-rule expansion for points within
    ZERO_SWITCH of any zero, so evaluation at interpolation nodes is exact.
    Raises PoleProximity when z comes within POLE_TOL of a pole.
    """
    _check_order(sequence, n)
    zf, shape, scalar = _flatten(z)
    if n == 0:
        return BlaschkeEval(
            _restore(np.ones_like(zf), shape, scalar),
            _restore(np.zeros_like(zf), shape, scalar),
            0,
        )
    a = sequence.as_array()[:n, None]
    w = 1.0 - np.abs(a) ** 2
    den = 1.0 - zf[None, :] * np.conj(a)
    if np.abs(den).min() < POLE_TOL:
        raise PoleProximity(f"point within {POLE_TOL} of a pole of B_{n}")
    num = zf[None, :] - a
    fac = num / den
    value = fac.prod(axis=0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        derivative = value * (w / (num * den)).sum(axis=0)
    near = (np.abs(num) < ZERO_SWITCH).any(axis=0)
    if near.any():
        derivative[near] = _product_rule_derivative(fac[:, near], w, den[:, near])
    return BlaschkeEval(_restore(value, shape, scalar), _restore(derivative, shape, scalar), n)


def second_derivative(sequence: PointSequence, n: int, z):
    """B_n''(z) through the logarithmic derivative.

    With S = B_n'/B_n one has B_n'' = B_n (S^2 + S').  The formula divides
    by (z - a_j), so it is only meant for points farther than ZERO_SWITCH
    from every zero; boundary points always qualify.
    """
    _check_order(sequence, n)
    zf, shape, scalar = _flatten(z)
    if n == 0:
        return _restore(np.zeros_like(zf), shape, scalar)
    a = sequence.as_array()[:n, None]
    w = 1.0 - np.abs(a) ** 2
    den = 1.0 - zf[None, :] * np.conj(a)
    if np.abs(den).min() < POLE_TOL:
        raise PoleProximity(f"point within {POLE_TOL} of a pole of B_{n}")
    num = zf[None, :] - a
    if np.abs(num).min() < ZERO_SWITCH:
        raise ValueError("second_derivative is not supported within ZERO_SWITCH of a zero")
    value = (num / den).prod(axis=0)
    s = (w / (num * den)).sum(axis=0)
    sp = (-w / (num**2 * den)).sum(axis=0) + (w * np.conj(a) / (num * den**2)).sum(axis=0)
    return _restore(value * (s**2 + sp), shape, scalar)


def _flatten_real(x):
    arr = np.asarray(x, dtype=np.float64)
    return arr.reshape(-1), arr.shape, arr.ndim == 0


def boundary_derivative_modulus(sequence: PointSequence, n: int, angle):
    """Partial Frostman sum at t = e^{i*angle}; equals |B_n'(t)| on the circle."""
    _check_order(sequence, n)
    ang, shape, scalar = _flatten_real(angle)
    if n == 0:
        return _restore(np.zeros_like(ang), shape, scalar)
    a = sequence.as_array()[:n, None]
    w = 1.0 - np.abs(a) ** 2
    t = np.exp(1j * ang)[None, :]
    out = (w / np.abs(1.0 - np.conj(t) * a) ** 2).sum(axis=0)
    return _restore(out, shape, scalar)


def gamma_density(sequence: PointSequence, n: int, angle):
    """gamma_n(x) = (1/2) sum_{k<n} (1-|a_k|^2) / (1 - 2|a_k|cos(x - arg a_k) + |a_k|^2).

    This is half the partial Frostman sum, i.e. |B_n'(e^{ix})|/2.
    """
    _check_order(sequence, n)
    if n < 1:
        raise ValueError("gamma_density needs n >= 1")
    ang, shape, scalar = _flatten_real(angle)
    a = sequence.as_array()[:n, None]
    r = np.abs(a)
    ph = np.angle(a)
    den = 1.0 - 2.0 * r * np.cos(ang[None, :] - ph) + r**2
    out = 0.5 * ((1.0 - r**2) / den).sum(axis=0)
    return _restore(out, shape, scalar)


def boundary_phase(sequence: PointSequence, n: int, angle_from, angle_to):
    """Integral of gamma_n over [angle_from, angle_to] via a per-factor closed form.

    Each factor has continuous boundary phase theta_j(x) = x - 2*arg(1 - conj(a_j) e^{ix});
    the argument 1 - conj(a_j) e^{ix} stays in the right half plane, so the principal
    branch is the continuous one and no unwrapping is required.  The return value is
    (theta_n(angle_to) - theta_n(angle_from)) / 2 with theta_n the phase of B_n, valid
    for arbitrary real endpoints including multi-revolution spans.
    """
    _check_order(sequence, n)
    if n < 1:
        raise ValueError("boundary_phase needs n >= 1")
    x = np.asarray(angle_from, dtype=np.float64)
    y = np.asarray(angle_to, dtype=np.float64)
    xb, yb = np.broadcast_arrays(x, y)
    shape = xb.shape
    scalar = xb.ndim == 0
    xf = xb.reshape(-1)
    yf = yb.reshape(-1)
    ac = np.conj(sequence.as_array()[:n, None])
    gx = np.angle(1.0 - ac * np.exp(1j * xf)[None, :]).sum(axis=0)
    gy = np.angle(1.0 - ac * np.exp(1j * yf)[None, :]).sum(axis=0)
    out = 0.5 * n * (yf - xf) - (gy - gx)
    return _restore(out, shape, scalar)
