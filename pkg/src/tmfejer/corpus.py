"""Test functions for the summation operators.

Members are `AnalyticTestFunction` instances with exact derivative
closures, so finite differences never enter the operator pipeline.  All
members except the Cauchy transforms are holomorphic across the closed
disc and may be sampled on the circle; grid-backed Cauchy transforms are
interior objects whose boundary information lives in their density.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

from tmfejer.blaschke import PointSequence, _flatten, _restore, eval_blaschke
from tmfejer.operators import AnalyticTestFunction
from tmfejer.quadrature import BoundaryGridFunction, refined_maximum

__all__ = [
    "constant_one",
    "identity_map",
    "mobius",
    "polynomial",
    "simple_pole",
    "blaschke_multiple",
    "schur_product",
    "cauchy_transform",
    "random_unit_density",
    "standard_corpus",
    "rational_corpus",
    "schur_corpus",
]

_CHUNK = 256


def _as_complex(z) -> np.ndarray:
    return np.asarray(z, dtype=np.complex128)


def constant_one() -> AnalyticTestFunction:
    return AnalyticTestFunction(
        value=lambda z: np.ones_like(_as_complex(z)),
        derivative=lambda z: np.zeros_like(_as_complex(z)),
        kind="rational",
        label="one",
    )


def identity_map() -> AnalyticTestFunction:
    """w_0(z) = z, the alpha = 0 member of the mobius family."""
    return AnalyticTestFunction(
        value=lambda z: _as_complex(z).copy(),
        derivative=lambda z: np.ones_like(_as_complex(z)),
        kind="schur",
        label="identity",
    )


def mobius(alpha: complex) -> AnalyticTestFunction:
    """w_alpha(z) = (z - alpha)/(1 - z conj(alpha)), a disc automorphism."""
    a = complex(alpha)
    if abs(a) >= 1.0:
        raise ValueError("mobius parameter must lie in the open disc")

    def value(z):
        zf = _as_complex(z)
        return (zf - a) / (1.0 - zf * np.conj(a))

    def derivative(z):
        zf = _as_complex(z)
        return (1.0 - abs(a) ** 2) / (1.0 - zf * np.conj(a)) ** 2

    return AnalyticTestFunction(
        value=value, derivative=derivative, kind="schur", label=f"mobius@{a:.3g}"
    )


def polynomial(coeffs, label: str = "") -> AnalyticTestFunction:
    """Polynomial with ascending coefficients (c0 + c1 z + ...)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    dc = P.polyder(c)

    return AnalyticTestFunction(
        value=lambda z: P.polyval(_as_complex(z), c),
        derivative=lambda z: P.polyval(_as_complex(z), dc),
        kind="rational",
        label=label or f"poly(deg {len(c) - 1})",
    )


def simple_pole(pole: complex, residue: complex = 1.0) -> AnalyticTestFunction:
    """f(z) = residue / (pole - z) with the pole outside the closed disc."""
    p = complex(pole)
    r = complex(residue)
    if abs(p) <= 1.0:
        raise ValueError("pole must lie outside the closed unit disc")

    return AnalyticTestFunction(
        value=lambda z: r / (p - _as_complex(z)),
        derivative=lambda z: r / (p - _as_complex(z)) ** 2,
        kind="rational",
        label=f"pole@{p:.3g}",
    )


def blaschke_multiple(points, scale: complex = 1.0) -> AnalyticTestFunction:
    """scale * B(z) for the finite Blaschke product over the given points."""
    seq = points if isinstance(points, PointSequence) else PointSequence(tuple(points))
    m = len(seq)
    s = complex(scale)

    return AnalyticTestFunction(
        value=lambda z: s * eval_blaschke(seq, m, z).value,
        derivative=lambda z: s * eval_blaschke(seq, m, z).derivative,
        kind="blaschke_multiple",
        label=f"blaschke(deg {m})",
    )


def schur_product(alphas) -> AnalyticTestFunction:
    """Product of mobius factors; bounded by one on the closed disc."""
    pars = tuple(complex(a) for a in alphas)
    if any(abs(a) >= 1.0 for a in pars):
        raise ValueError("factors must have parameters in the open disc")

    def _factors(zf):
        vals = [(zf - a) / (1.0 - zf * np.conj(a)) for a in pars]
        ders = [(1.0 - abs(a) ** 2) / (1.0 - zf * np.conj(a)) ** 2 for a in pars]
        return vals, ders

    def value(z):
        zf = _as_complex(z)
        vals, _ = _factors(zf)
        out = np.ones_like(zf)
        for v in vals:
            out = out * v
        return out

    def derivative(z):
        zf = _as_complex(z)
        vals, ders = _factors(zf)
        out = np.zeros_like(zf)
        for j in range(len(pars)):
            term = ders[j]
            for i, v in enumerate(vals):
                if i != j:
                    term = term * v
            out = out + term
        return out

    return AnalyticTestFunction(
        value=value, derivative=derivative, kind="schur", label=f"schur(deg {len(pars)})"
    )


def cauchy_transform(density: BoundaryGridFunction, label: str = "") -> AnalyticTestFunction:
    """f(z) = (1/2pi) integral mu(t) / (1 - conj(t) z) |dt| for |z| < 1.

    Value and derivative are grid quadratures over the density's own
    nodes, chunked to bound memory.  Not evaluable on the circle; the
    operator layer reads boundary data from the attached density instead.
    """
    pts = density.points
    ct = np.conj(pts)[None, :]
    mu = density.samples[None, :]

    def _transform(z, power: int, weight) -> np.ndarray:
        zf, shape, scalar = _flatten(z)
        out = np.empty(zf.shape, dtype=np.complex128)
        for lo in range(0, zf.size, _CHUNK):
            zc = zf[lo : lo + _CHUNK][:, None]
            out[lo : lo + _CHUNK] = (weight * mu / (1.0 - ct * zc) ** power).mean(axis=1)
        return _restore(out, shape, scalar)

    return AnalyticTestFunction(
        value=lambda z: _transform(z, 1, 1.0),
        derivative=lambda z: _transform(z, 2, ct),
        kind="cauchy_transform",
        density=density,
        label=label or "cauchy",
    )


def random_unit_density(
    rng: np.random.Generator, resolution: int = 4096, degree: int = 6
) -> BoundaryGridFunction:
    """Random trigonometric polynomial with true sup norm one on the circle.

    Coefficients are complex Gaussian; the scale divides out the refined
    maximum of |mu| rather than a grid maximum, so the bound sup|mu| <= 1
    holds up to the refinement tolerance and not merely at the nodes.
    """
    ms = np.arange(-degree, degree + 1)
    g = rng.standard_normal(ms.size) + 1j * rng.standard_normal(ms.size)

    def modulus(theta):
        th = np.asarray(theta, dtype=np.float64)
        return np.abs(np.exp(1j * np.outer(th.reshape(-1), ms)) @ g).reshape(th.shape)

    _, peak = refined_maximum(modulus)
    g = g / peak
    angles = 2.0 * np.pi * np.arange(resolution) / resolution
    samples = np.exp(1j * np.outer(angles, ms)) @ g
    return BoundaryGridFunction(samples)


def standard_corpus(seed: int = 7, resolution: int = 4096) -> tuple:
    """A fixed mixed bag: rational, Schur, Blaschke and Cauchy members."""
    rng = np.random.default_rng(seed)
    return (
        constant_one(),
        identity_map(),
        mobius(0.3),
        mobius(-0.4 + 0.2j),
        polynomial((1.0, 0.5, -0.25j, 0.125), label="poly3"),
        polynomial((0.2, 0.0, 0.4j, 0.0, -0.3), label="poly4"),
        simple_pole(1.6),
        simple_pole(-1.25j, residue=0.5),
        blaschke_multiple((0.4, -0.3j), scale=0.9),
        schur_product((0.3, -0.5j)),
        cauchy_transform(random_unit_density(rng, resolution), label="cauchy-a"),
        cauchy_transform(random_unit_density(rng, resolution), label="cauchy-b"),
    )


def rational_corpus(count: int = 10) -> tuple:
    """Members holomorphic across the closed disc, safe to sample on it."""
    members = (
        constant_one(),
        identity_map(),
        mobius(0.3),
        mobius(-0.4 + 0.2j),
        mobius(0.55j),
        polynomial((1.0, 0.5, -0.25j, 0.125), label="poly3"),
        polynomial((0.2, 0.0, 0.4j, 0.0, -0.3), label="poly4"),
        simple_pole(1.6),
        simple_pole(-1.25j, residue=0.5),
        schur_product((0.3, -0.5j)),
        blaschke_multiple((0.4, -0.3j), scale=0.9),
        polynomial((0.0, 0.0, 1.0), label="square"),
    )
    if not 1 <= count <= len(members):
        raise ValueError(f"count must be in [1, {len(members)}]")
    return members[:count]


def schur_corpus() -> tuple:
    """Members with sup norm at most one on the closed disc."""
    return (
        identity_map(),
        mobius(0.3),
        mobius(-0.4 + 0.2j),
        mobius(0.55j),
        schur_product((0.3, -0.5j)),
        schur_product((0.2, 0.4j, -0.3)),
    )
