"""Summation operators: coefficients, kernels, sigma variants, delta.

Oracles: refined-grid quadrature for coefficients, the classical a == 0
closed forms, explicit alternative quadratures for the integral form of
delta, and hand-derived Moebius/Blaschke identities.
"""

import numpy as np
import pytest

from conftest import circle_grid, zeros_sequence
from tmfejer.blaschke import PointSequence, eval_blaschke
from tmfejer.corpus import (
    cauchy_transform,
    constant_one,
    identity_map,
    mobius,
    polynomial,
    rational_corpus,
    schur_corpus,
    simple_pole,
)
from tmfejer.operators import (
    CriticalPoint,
    NearBoundary,
    cesaro_mean,
    coefficients,
    coefficients_of,
    delta,
    extremal_voronovskaya,
    fejer_kernel,
    fejer_kernel_angular,
    partial_sum,
    sigma_positive,
    sigma_rusak,
)
from tmfejer.quadrature import BoundaryGridFunction, default_resolution, refined_maximum
from tmfejer.tm_basis import ExtendedOffCircle, TMBasis, phi_values


def grid_of(f, resolution=4096):
    return BoundaryGridFunction.from_callable(f.value, resolution)


class TestCoefficients:
    def test_constant_coefficients_are_values_at_zero(self, seq_mixed):
        # <1, phi_k> = conj(phi_k(0)) because the mean of an H^2 function
        # over the circle is its value at the origin.
        basis = TMBasis(seq_mixed, 8)
        c = coefficients_of(constant_one(), basis)
        expected = np.conj(phi_values(basis, 0.0 + 0j))
        got = np.asarray([c[k] for k in range(8)])
        assert np.abs(got - expected).max() < 1e-12

    def test_refined_grid_agreement(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        f = simple_pole(1.6)
        coarse = coefficients_of(f, basis, resolution=4096).positive()
        fine = coefficients_of(f, basis, resolution=16384).positive()
        assert np.abs(coarse - fine).max() < 1e-12

    def test_negative_coefficient_of_conjugate(self, seq_short):
        # f(t) = conj(t): c_{-1} = mean(phi_0), the value phi_0(0); all
        # nonnegative-index coefficients vanish.
        basis = TMBasis(seq_short, 3)
        f = BoundaryGridFunction.from_callable(np.conj, 4096)
        c = coefficients(f, basis, include_negative=True)
        phi0_at_zero = complex(phi_values(basis, 0.0 + 0j)[0])
        assert c[-1] == pytest.approx(phi0_at_zero, abs=1e-12)
        assert abs(c[0]) < 1e-12 and abs(c[2]) < 1e-12

    def test_resolution_floor(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        with pytest.raises(ValueError):
            coefficients(BoundaryGridFunction.from_callable(lambda z: z, 64), basis)

    def test_bessel_inequality(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        f = BoundaryGridFunction.from_callable(
            lambda t: np.exp(t) / (2.0 - t), 4096
        )
        c = coefficients(f, basis).positive()
        assert (np.abs(c) ** 2).sum() <= (np.abs(f.samples) ** 2).mean() + 1e-8

    def test_membership(self, seq_short):
        c = coefficients_of(constant_one(), TMBasis(seq_short, 3))
        assert 2 in c and -1 not in c


class TestPartialSum:
    def test_reproduces_basis_function(self, seq_mixed):
        basis = TMBasis(seq_mixed, 5)
        f = BoundaryGridFunction(phi_values(basis, circle_grid(4096))[2])
        c = coefficients(f, basis)
        z = np.array([0.2 + 0.1j, -0.4j, 0.6])
        s3 = np.asarray(partial_sum(c, basis, 3, z))
        assert np.abs(s3 - phi_values(basis, z)[2]).max() < 1e-10
        assert np.abs(np.asarray(partial_sum(c, basis, 2, z))).max() < 1e-10

    def test_symmetric_needs_circle(self, seq_short):
        basis = TMBasis(seq_short, 3)
        c = coefficients_of(constant_one(), basis, include_negative=True)
        with pytest.raises(ExtendedOffCircle):
            partial_sum(c, basis, 2, 0.5, symmetric=True)

    def test_length_validation(self, seq_short):
        basis = TMBasis(seq_short, 3)
        c = coefficients_of(constant_one(), basis)
        with pytest.raises(ValueError):
            partial_sum(c, basis, 4, 0.1)


class TestCesaroMean:
    def test_needs_negative_coefficients(self, seq_short):
        basis = TMBasis(seq_short, 3)
        c = coefficients_of(constant_one(), basis)
        with pytest.raises(ValueError):
            cesaro_mean(c, basis, 2, 1.0 + 0j)

    def test_circle_only(self, seq_short):
        basis = TMBasis(seq_short, 3)
        c = coefficients_of(constant_one(), basis, include_negative=True)
        with pytest.raises(ExtendedOffCircle):
            cesaro_mean(c, basis, 2, 0.3 + 0j)

    def test_excess_statistic_frozen(self):
        # For a == 1/2 and n = 2 the uniform distance from the constant is
        # (1/2)(1/2 + 1/4) = 0.375, attained at angle pi.
        seq = PointSequence((0.5, 0.5))
        basis = TMBasis(seq, 2)
        c = coefficients_of(constant_one(), basis, include_negative=True)

        def ev(theta):
            t = np.exp(1j * np.asarray(theta, dtype=np.float64))
            return np.abs(1.0 - np.asarray(cesaro_mean(c, basis, 2, t)))

        x, sup = refined_maximum(ev)
        assert sup == pytest.approx(0.375, abs=1e-10)
        assert x == pytest.approx(np.pi, abs=1e-5)


class TestFejerKernel:
    def test_classical_reduction(self):
        basis = TMBasis(zeros_sequence(5), 5)
        u = np.linspace(0.1, 2.0 * np.pi - 0.1, 64)
        vals = np.asarray(fejer_kernel(basis, np.exp(1j * u), 1.0 + 0j))
        fejer = (np.sin(5 * u / 2.0) / np.sin(u / 2.0)) ** 2 / 5.0
        assert np.abs(vals - fejer).max() < 1e-12

    def test_positive_and_unit_mean(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        t = circle_grid(4096)
        for ang in (0.0, 0.9, 2.4, 4.1):
            row = np.asarray(fejer_kernel(basis, t, np.exp(1j * ang)))
            assert row.min() >= -1e-12
            assert row.mean() == pytest.approx(1.0, abs=1e-10)

    def test_diagonal_is_derivative_modulus(self, seq_mixed):
        basis = TMBasis(seq_mixed, 6)
        t = circle_grid(8)
        d = np.abs(eval_blaschke(seq_mixed, 6, t).derivative)
        assert np.abs(np.asarray(fejer_kernel(basis, t, t)) - d).max() < 1e-9

    def test_angular_matches_rational(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        x = np.linspace(0.0, 2.0 * np.pi, 9)[:-1]
        y = x[:, None] + np.linspace(0.3, 5.9, 7)[None, :]
        a = np.asarray(fejer_kernel_angular(basis, x[:, None], y))
        r = np.asarray(fejer_kernel(basis, np.exp(1j * y), np.exp(1j * x[:, None])))
        assert np.abs(a - r).max() < 1e-8

    def test_near_diagonal_bands(self, seq_mixed):
        basis = TMBasis(seq_mixed, 4)
        x = 0.77
        z = np.exp(1j * x)
        for du in (5e-13, 3e-9, 1e-7):
            rational = float(np.asarray(fejer_kernel(basis, z * np.exp(1j * du), z)))
            angular = float(np.asarray(fejer_kernel_angular(basis, x, x + du)))
            assert rational == pytest.approx(angular, rel=1e-6)

    def test_order_zero_rejected(self, seq_short):
        basis = TMBasis(seq_short, 0)
        with pytest.raises(ValueError):
            fejer_kernel(basis, 1.0 + 0j, 1.0j)
        with pytest.raises(ValueError):
            fejer_kernel_angular(basis, 0.0, 1.0)


class TestSigmaPositive:
    def test_preserves_constants(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        z = np.array([0.0, 0.1 + 0.2j, -0.5, 0.3j, complex(np.exp(0.4j))])
        out = np.asarray(sigma_positive(constant_one(), basis, z))
        assert np.abs(out - 1.0).max() < 1e-12

    def test_identity_map_closed_form(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        z = np.array([0.1 + 0.2j, -0.5, 0.3j, 0.7 - 0.1j])
        be = eval_blaschke(seq_mixed, 8, z)
        b0 = eval_blaschke(seq_mixed, 8, 0.0).value
        expected = z - be.value / be.derivative * (1.0 - np.conj(b0) * be.value)
        got = np.asarray(sigma_positive(identity_map(), basis, z))
        assert np.abs(got - expected).max() < 1e-10

    def test_mobius_closed_form(self, seq_mixed):
        # sigma+(w_alpha) = w_alpha - w_alpha'(z) (B/B')(1 - conj(B(alpha)) B(z)).
        alpha = 0.3
        basis = TMBasis(seq_mixed, 6)
        f = mobius(alpha)
        z = np.array([0.15 - 0.3j, 0.45j, -0.2 + 0.2j])
        be = eval_blaschke(seq_mixed, 6, z)
        ba = eval_blaschke(seq_mixed, 6, alpha).value
        expected = np.asarray(f.value(z)) - np.asarray(f.derivative(z)) * (
            be.value / be.derivative
        ) * (1.0 - np.conj(ba) * be.value)
        got = np.asarray(sigma_positive(f, basis, z))
        assert np.abs(got - expected).max() < 1e-10

    def test_classical_monomials(self):
        basis = TMBasis(zeros_sequence(6), 6)
        z = np.array([0.3 + 0.1j, -0.6j, 0.8])
        for m in range(6):
            f = polynomial((0.0,) * m + (1.0,), label=f"z^{m}")
            got = np.asarray(sigma_positive(f, basis, z))
            assert np.abs(got - (1.0 - m / 6.0) * z**m).max() < 1e-12

    def test_critical_point_raises(self):
        basis = TMBasis(PointSequence((0.5, -0.5)), 2)
        with pytest.raises(CriticalPoint):
            sigma_positive(identity_map(), basis, 0.0 + 0j)

    def test_repeated_node_degenerates_to_partial_sum(self):
        basis = TMBasis(PointSequence((0.3, 0.3)), 2)
        f = simple_pole(1.6)
        c = coefficients_of(f, basis)
        got = complex(sigma_positive(f, basis, 0.3 + 0j, coeffs=c))
        assert got == pytest.approx(complex(partial_sum(c, basis, 2, 0.3 + 0j)), abs=1e-12)

    def test_order_zero_is_identity(self, seq_short):
        basis = TMBasis(seq_short, 0)
        f = simple_pole(1.6)
        assert complex(sigma_positive(f, basis, 0.2j)) == pytest.approx(
            complex(f.value(0.2j))
        )

    def test_precomputed_coefficients_match(self, seq_short):
        basis = TMBasis(seq_short, 3)
        f = mobius(-0.4 + 0.2j)
        c = coefficients_of(f, basis)
        z = 0.3 - 0.2j
        assert complex(sigma_positive(f, basis, z, coeffs=c)) == pytest.approx(
            complex(sigma_positive(f, basis, z)), abs=1e-14
        )


class TestSigmaRusak:
    def test_unit_response(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        probes = circle_grid(32)
        out = np.asarray(sigma_rusak(grid_of(constant_one()), basis, probes))
        assert np.abs(out - 1.0).max() < 1e-10

    def test_positivity_on_nonnegative_data(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        t = circle_grid(4096)
        data = BoundaryGridFunction(1.0 + 0.9 * np.cos(np.angle(t)))
        out = np.asarray(sigma_rusak(data, basis, circle_grid(64)))
        assert np.abs(out.imag).max() < 1e-10
        assert out.real.min() >= -1e-10

    def test_classical_cesaro_mean(self):
        # a == 0 turns the kernel into the Fejer kernel, so the operator
        # computes the classical (C,1) mean of the Fourier series.
        n = 4
        basis = TMBasis(zeros_sequence(n), n)
        theta = np.angle(circle_grid(4096))
        data = BoundaryGridFunction(3.0 + np.cos(theta) + 0.5 * np.sin(2.0 * theta))
        probes = circle_grid(16)
        pt = np.angle(probes)
        expected = (
            3.0
            + (1.0 - 1.0 / n) * np.cos(pt)
            + (1.0 - 2.0 / n) * 0.5 * np.sin(2.0 * pt)
        )
        got = np.asarray(sigma_rusak(data, basis, probes))
        assert np.abs(got - expected).max() < 1e-10

    def test_agreement_with_sigma_positive(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        probes = circle_grid(64)
        for f in rational_corpus(6):
            sr = np.asarray(sigma_rusak(grid_of(f), basis, probes))
            sp = np.asarray(sigma_positive(f, basis, probes))
            assert np.abs(sr - sp).max() < 1e-7, f.label

    def test_contraction_in_all_norms(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        probes = circle_grid(256)
        for f in rational_corpus(5):
            data = grid_of(f)
            a = np.abs(data.samples)
            out = np.abs(np.asarray(sigma_rusak(data, basis, probes)))
            assert out.max() <= a.max() + 1e-9
            assert out.mean() <= a.mean() + 1e-9
            assert np.sqrt((out**2).mean()) <= np.sqrt((a**2).mean()) + 1e-9

    def test_order_zero_nearest_sample(self, seq_short):
        basis = TMBasis(seq_short, 0)
        data = BoundaryGridFunction.from_callable(lambda z: z, 16)
        t = complex(np.exp(2j * np.pi * 5 / 16))
        assert complex(sigma_rusak(data, basis, t)) == pytest.approx(t)

    def test_requires_circle(self, seq_short):
        basis = TMBasis(seq_short, 2)
        with pytest.raises(ExtendedOffCircle):
            sigma_rusak(grid_of(constant_one()), basis, 0.5 + 0j)


class TestDelta:
    def test_constant_gives_zero(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        z = np.array([0.0, 0.2 + 0.3j, -0.6j, 0.85])
        assert np.abs(np.asarray(delta(constant_one(), basis, z))).max() < 1e-12

    def test_interpolates_derivative_at_nodes(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        nodes = seq_mixed.as_array()
        for f in rational_corpus(6):
            got = np.asarray(delta(f, basis, nodes))
            want = np.asarray(f.derivative(nodes))
            assert np.abs(got - want).max() < 1e-8, f.label

    def test_interpolates_at_repeated_node(self):
        basis = TMBasis(PointSequence((0.3, 0.3)), 2)
        f = simple_pole(1.6)
        assert complex(delta(f, basis, 0.3 + 0j)) == pytest.approx(
            complex(f.derivative(0.3 + 0j)), abs=1e-10
        )

    def test_algebraic_and_integral_routes_agree(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        f = mobius(-0.4 + 0.2j)
        wrapped = cauchy_transform(grid_of(f), label="wrapped")
        z = np.array([0.2 + 0.3j, -0.4 + 0.1j, 0.5j, 0.75])
        assert np.abs(
            np.asarray(delta(f, basis, z)) - np.asarray(delta(wrapped, basis, z))
        ).max() < 1e-8

    def test_integral_route_at_origin_explicit_sum(self):
        # At z = 0 the weighted integral collapses to
        # mean(conj(t) conj(B(t)) f(t)), an independent one-line oracle.
        seq = PointSequence((0.5, -0.5))
        basis = TMBasis(seq, 2)
        f = simple_pole(1.6)
        t = circle_grid(4096)
        bt = eval_blaschke(seq, 2, t).value
        integral = (np.conj(t) * np.conj(bt) * f.value(t)).mean()
        b0 = eval_blaschke(seq, 2, 0.0).value
        oracle = complex(f.derivative(0.0)) - b0 * integral
        # B' vanishes at 0, so delta must fall back to the integral form.
        assert complex(delta(f, basis, 0.0 + 0j)) == pytest.approx(oracle, abs=1e-12)

    def test_near_boundary_rejected(self, seq_short):
        basis = TMBasis(seq_short, 3)
        with pytest.raises(NearBoundary):
            delta(constant_one(), basis, 0.9999999996)

    def test_order_zero_is_zero(self, seq_short):
        basis = TMBasis(seq_short, 0)
        assert complex(delta(simple_pole(1.6), basis, 0.3j)) == 0j

    def test_voronovskaya_bound_small_sample(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        rng = np.random.default_rng(11)
        z = np.array([0.3, 0.55j, -0.4 + 0.2j])
        bound = np.abs(eval_blaschke(seq_mixed, 8, z).value) / (
            1.0 - np.abs(z) ** 2
        )
        from tmfejer.corpus import random_unit_density

        for _ in range(10):
            f = cauchy_transform(random_unit_density(rng, 4096))
            gap = np.abs(
                np.asarray(delta(f, basis, z)) - np.asarray(f.derivative(z))
            )
            assert (gap <= bound + 1e-7).all()

    def test_extremal_equality(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        for z in (0.3 + 0.4j, -0.55, 0.7j):
            fstar = extremal_voronovskaya(basis, z)
            gap = abs(complex(delta(fstar, basis, z)) - complex(fstar.derivative(z)))
            bound = abs(eval_blaschke(seq_mixed, 8, z).value) / (1.0 - abs(z) ** 2)
            assert gap == pytest.approx(bound, abs=1e-7)

    def test_boundary_equality_for_constant(self, seq_mixed):
        # delta(e0) vanishes identically, so on the circle the weighted
        # distance |delta(e0) - B' conj(B) e0| reduces to |B'| exactly.
        basis = TMBasis(seq_mixed, 8)
        assert np.abs(np.asarray(delta(constant_one(), basis, 0.5 - 0.2j))).max() < 1e-12
        t = circle_grid(64)
        be = eval_blaschke(seq_mixed, 8, t)
        lhs = np.abs(0.0 - be.derivative * np.conj(be.value) * 1.0)
        assert np.abs(lhs - np.abs(be.derivative)).max() < 1e-9


class TestSchurPointwiseBound:
    def test_two_sided_bound_attained(self, seq_mixed):
        basis = TMBasis(seq_mixed, 4)
        for z in (0.25 + 0.3j, -0.5j, 0.6):
            be = eval_blaschke(seq_mixed, 4, z)
            assert abs(be.derivative) > 1e-3
            floor = (
                abs(be.value / be.derivative)
                * (1.0 - abs(be.value) ** 2)
                / (1.0 - abs(z) ** 2)
            )
            members = list(schur_corpus()) + [mobius(z)]
            values = [
                abs(complex(f.value(z)) - complex(sigma_positive(f, basis, z)))
                for f in members
            ]
            # every member obeys the upper estimate ...
            for f, v in zip(members, values):
                assert v <= floor + abs(be.value) ** 2 + 1e-7, f.label
            # ... and the Moebius factor vanishing at z attains the floor.
            assert max(values) >= floor - 1e-7
            assert values[-1] == pytest.approx(floor, abs=1e-9)


class TestExtremalMember:
    def test_unimodular_trace_and_zeros(self, seq_mixed):
        basis = TMBasis(seq_mixed, 8)
        z0 = 0.3 + 0.4j
        fstar = extremal_voronovskaya(basis, z0, theta=0.7)
        t = circle_grid(64)
        assert np.abs(np.abs(np.asarray(fstar.value(t))) - 1.0).max() < 1e-12
        assert abs(complex(fstar.value(z0))) < 1e-14
        assert np.abs(np.asarray(fstar.value(seq_mixed.as_array()))).max() < 1e-14

    def test_cauchy_self_consistency(self, seq_mixed):
        # Quadrature of the attached density through the Cauchy kernel must
        # reproduce the explicit product formula inside the disc.
        basis = TMBasis(seq_mixed, 8)
        fstar = extremal_voronovskaya(basis, 0.3 + 0.4j)
        k = cauchy_transform(fstar.density)
        z = np.array([0.1 - 0.2j, 0.5j, -0.3])
        assert np.abs(
            np.asarray(k.value(z)) - np.asarray(fstar.value(z))
        ).max() < 1e-9
        assert np.abs(
            np.asarray(k.derivative(z)) - np.asarray(fstar.derivative(z))
        ).max() < 1e-9

    def test_rejects_exterior_point(self, seq_short):
        with pytest.raises(ValueError):
            extremal_voronovskaya(TMBasis(seq_short, 3), 1.2)
