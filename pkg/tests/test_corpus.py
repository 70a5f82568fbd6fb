"""Corpus self-checks: derivative closures, class membership, transforms."""

import numpy as np
import pytest

from conftest import central_difference, circle_grid
from tmfejer.analysis import interior_probes
from tmfejer.corpus import (
    blaschke_multiple,
    cauchy_transform,
    constant_one,
    identity_map,
    mobius,
    polynomial,
    random_unit_density,
    rational_corpus,
    schur_corpus,
    schur_product,
    simple_pole,
    standard_corpus,
)
from tmfejer.operators import AnalyticTestFunction
from tmfejer.quadrature import BoundaryGridFunction


class TestDerivativeClosures:
    def test_every_member_matches_central_difference(self):
        probes = interior_probes(8, radii=(0.2, 0.45, 0.7))
        for f in standard_corpus():
            for z in probes:
                fd = central_difference(f.value, complex(z))
                got = complex(np.asarray(f.derivative(np.asarray(z))))
                assert got == pytest.approx(fd, abs=2e-6), f.label


class TestClassMembership:
    def test_schur_members_bounded_by_one(self):
        zs = np.concatenate([interior_probes(16), circle_grid(64)])
        for f in schur_corpus():
            vals = np.abs(np.asarray(f.value(zs)))
            assert vals.max() <= 1.0 + 1e-10, f.label

    def test_blaschke_multiple_unimodular_scale(self):
        f = blaschke_multiple((0.4, -0.3j), scale=0.9)
        t = circle_grid(64)
        assert np.abs(np.abs(np.asarray(f.value(t))) - 0.9).max() < 1e-12

    def test_kind_validation(self):
        with pytest.raises(ValueError):
            AnalyticTestFunction(lambda z: z, lambda z: 1.0, kind="unknown")
        with pytest.raises(ValueError):
            AnalyticTestFunction(lambda z: z, lambda z: 1.0, kind="cauchy_transform")

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            mobius(1.0)
        with pytest.raises(ValueError):
            simple_pole(0.5)
        with pytest.raises(ValueError):
            schur_product((0.5, 1.2))


class TestCauchyTransform:
    def test_reproduces_holomorphic_members(self):
        # K applied to the boundary trace is the identity on H^2.
        zs = interior_probes(12)
        for f in rational_corpus(8):
            trace = BoundaryGridFunction.from_callable(f.value, 4096)
            k = cauchy_transform(trace, label=f"K[{f.label}]")
            assert np.abs(
                np.asarray(k.value(zs)) - np.asarray(f.value(zs))
            ).max() < 1e-10, f.label
            assert np.abs(
                np.asarray(k.derivative(zs)) - np.asarray(f.derivative(zs))
            ).max() < 1e-9, f.label

    def test_kills_antiholomorphic_part(self):
        # K annihilates conj(t): the transform of t-bar is 0 in the disc.
        trace = BoundaryGridFunction.from_callable(np.conj, 4096)
        k = cauchy_transform(trace)
        zs = interior_probes(8)
        assert np.abs(np.asarray(k.value(zs))).max() < 1e-12


class TestRandomDensities:
    def test_unit_sup_after_normalization(self):
        rng = np.random.default_rng(3)
        mu = random_unit_density(rng, 4096)
        peak = np.abs(mu.samples).max()
        assert peak <= 1.0 + 1e-9
        assert peak > 0.95

    def test_seed_reproducibility(self):
        a = random_unit_density(np.random.default_rng(9), 1024)
        b = random_unit_density(np.random.default_rng(9), 1024)
        assert np.array_equal(a.samples, b.samples)


class TestCorpusShape:
    def test_standard_corpus_mix(self):
        members = standard_corpus()
        kinds = {m.kind for m in members}
        assert len(members) == 12
        assert kinds == {"rational", "schur", "blaschke_multiple", "cauchy_transform"}
        assert len({m.label for m in members}) == len(members)

    def test_rational_corpus_is_circle_safe(self):
        t = circle_grid(32)
        for f in rational_corpus(10):
            vals = np.asarray(f.value(t))
            assert np.isfinite(vals).all(), f.label

    def test_rational_corpus_count_validation(self):
        with pytest.raises(ValueError):
            rational_corpus(0)
        with pytest.raises(ValueError):
            rational_corpus(99)

    def test_constant_and_identity_frozen(self):
        assert complex(np.asarray(constant_one().value(0.3j))) == 1.0 + 0j
        assert complex(np.asarray(identity_map().value(0.3j))) == 0.3j
        assert complex(np.asarray(polynomial((1.0, 2.0)).derivative(0.5))) == 2.0 + 0j
