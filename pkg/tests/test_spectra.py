import math

import numpy as np
import pytest

from matstab import spectra as sp

from conftest import charpoly_roots, multiset_close, random_hurwitz


class TestEigenvalues:
    def test_diagonal(self):
        assert np.allclose(sp.eigenvalues(np.diag([-1.0, -2.0])), [-2, -1])

    def test_rotation(self):
        got = sp.eigenvalues([[0.0, 1.0], [-1.0, 0.0]])
        assert multiset_close(got, [1j, -1j], 1e-12)

    def test_against_charpoly_root_oracle(self, rng):
        for _ in range(25):
            a = rng.normal(size=(5, 5))
            got = sp.eigenvalues(a)
            expect = charpoly_roots(a)
            scale = 1 + abs(expect).max()
            assert multiset_close(got, expect, 1e-7 * scale)

    def test_conjugate_symmetry(self, rng):
        for n in (2, 3, 4, 5, 6):
            spec = sp.eigenvalues(rng.normal(size=(n, n)))
            assert sp.conjugate_paired(spec, tol=1e-8)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            sp.eigenvalues([[np.inf, 0.0], [0.0, 1.0]])


class TestMembership:
    def test_half_plane_left(self):
        r = sp.HalfPlaneLeft()
        assert sp.region_membership(-1.0, r) is sp.Membership.INSIDE
        assert sp.region_membership(1.0, r) is sp.Membership.OUTSIDE
        assert sp.region_membership(1e-12j, r) is sp.Membership.BOUNDARY

    def test_hyperbolic_axis_is_boundary(self):
        m = sp.region_membership(0.5j, sp.Hyperbolic())
        assert m in (sp.Membership.BOUNDARY, sp.Membership.OUTSIDE)
        assert m is not sp.Membership.INSIDE
        assert m is sp.Membership.BOUNDARY

    def test_disk(self):
        r = sp.Disk(0.0, 1.0)
        assert sp.region_membership(0.5, r) is sp.Membership.INSIDE
        assert sp.region_membership(1.5, r) is sp.Membership.OUTSIDE
        assert sp.region_membership(1.0, r) is sp.Membership.BOUNDARY

    def test_sector(self):
        r = sp.SectorRight(math.pi / 4)
        assert sp.region_membership(1.0, r) is sp.Membership.INSIDE
        assert sp.region_membership(1j, r) is sp.Membership.OUTSIDE
        assert sp.region_membership(0.0, r) is sp.Membership.BOUNDARY

    def test_axes_and_lines(self):
        assert sp.region_membership(2.0, sp.PositiveRealAxis()) \
            is sp.Membership.INSIDE
        assert sp.region_membership(0.0, sp.PositiveRealAxis()) \
            is sp.Membership.BOUNDARY
        assert sp.region_membership(-3.0, sp.NegativeRealAxis()) \
            is sp.Membership.INSIDE
        assert sp.region_membership(1 + 0.5j, sp.RealLine()) \
            is sp.Membership.OUTSIDE
        assert sp.region_membership(7.0, sp.RealLine()) is sp.Membership.INSIDE
        assert sp.region_membership(0.0, sp.PunctureOrigin()) \
            is sp.Membership.BOUNDARY

    def test_lmi_half_plane_matches_direct(self, rng):
        # f(z) = z + conj(z) classifies exactly as the left half-plane
        r = sp.LMIRegion([[0.0]], [[1.0]])
        direct = sp.HalfPlaneLeft()
        for _ in range(1000):
            z = complex(rng.normal(), rng.normal())
            assert sp.region_membership(z, r) == sp.region_membership(z, direct)

    def test_emi_unit_disk_matches_direct(self, rng):
        r = sp.EMIRegion([[-1.0]], [[0.0]], [[1.0]])
        direct = sp.Disk(0.0, 1.0)
        for _ in range(500):
            z = complex(rng.normal(), rng.normal())
            assert sp.region_membership(z, r) == sp.region_membership(z, direct)


class TestRegionStable:
    def test_stable_diag(self):
        v = sp.region_stable(np.diag([-1.0, -2.0]), sp.HalfPlaneLeft())
        assert v.proved

    def test_schur_diag(self):
        v = sp.region_stable(np.diag([0.5, -0.5]), sp.Disk(0.0, 1.0))
        assert v.proved

    def test_two_by_two_root_formula(self):
        # trace -1, det 2: roots (-1 +- i sqrt(7))/2, both in the left plane
        a = np.array([[1.0, -4.0], [1.0, -2.0]])
        roots = np.roots([1.0, 1.0, 2.0])
        assert roots.real.max() < 0
        assert sp.region_stable(a, sp.HalfPlaneLeft()).proved

    def test_refuted_carries_witness(self):
        v = sp.region_stable(np.diag([1.0, -1.0]), sp.HalfPlaneLeft())
        assert v.refuted
        assert np.isclose(v.witness["eigenvalue"].real, 1.0)

    def test_lmi_emi_encodings_agree_with_direct(self, rng):
        lmi_half = sp.LMIRegion([[0.0]], [[1.0]])
        emi_disk = sp.EMIRegion([[-1.0]], [[0.0]], [[1.0]])
        pairs = 0
        for _ in range(500):
            n = int(rng.integers(2, 5))
            a = rng.normal(size=(n, n))
            for direct, encoded in ((sp.HalfPlaneLeft(), lmi_half),
                                    (sp.Disk(0.0, 1.0), emi_disk)):
                v1 = sp.region_stable(a, direct)
                v2 = sp.region_stable(a, encoded)
                pairs += 1
                assert v1.status == v2.status
        assert pairs == 1000


class TestInertia:
    def test_split(self):
        out = sp.inertia(np.diag([1.0, -1.0]), sp.HalfPlaneRight())
        assert out.as_tuple() == (1, 0, 1)

    def test_boundary(self):
        out = sp.inertia(np.zeros((1, 1)), sp.HalfPlaneLeft())
        assert out.as_tuple() == (0, 1, 0)

    def test_triangular_diagonal_readoff(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 6))
            a = np.triu(rng.normal(size=(n, n)))
            d = np.diag(a)
            d = np.where(np.abs(d) < 1e-3, 1.0, d)  # keep off the boundary
            np.fill_diagonal(a, d)
            out = sp.inertia(a, sp.HalfPlaneRight())
            assert out.as_tuple() == (int((d > 0).sum()), 0, int((d < 0).sum()))

    def test_counts_sum_to_n(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 7))
            a = rng.normal(size=(n, n))
            out = sp.inertia(a, sp.Disk(0.0, 1.0))
            assert sum(out.as_tuple()) == n


class TestGershgorin:
    def test_symmetric_example(self):
        disks, v = sp.gershgorin([[-3.0, 1.0], [1.0, -3.0]])
        assert disks == [(-3.0, 1.0), (-3.0, 1.0)]
        assert v.proved

    def test_diagonal_zero_radii(self):
        disks, v = sp.gershgorin(np.diag([-1.0, -2.0]))
        assert disks == [(-1.0, 0.0), (-2.0, 0.0)]
        assert v.proved

    def test_eigenvalues_in_disk_union(self, rng):
        for _ in range(200):
            a = rng.normal(size=(5, 5))
            disks, _ = sp.gershgorin(a)
            for z in sp.eigenvalues(a):
                assert any(abs(z - c) <= r + 1e-9 for c, r in disks)


class TestSimulateDecay:
    def test_pure_decay(self):
        ratio = sp.simulate_decay(-np.eye(3), 20.0, 0.01)
        assert ratio <= math.exp(-20.0) + 1e-9

    def test_zero_matrix(self):
        assert np.isclose(sp.simulate_decay(np.zeros((2, 2)), 5.0, 0.01), 1.0)

    def test_stable_matrix_bound(self, rng):
        for _ in range(5):
            a = random_hurwitz(rng, 4, margin_lo=0.5, margin_hi=1.0)
            ratio = sp.simulate_decay(a, 40.0, 0.005)
            assert ratio < 1e-6

    def test_divergence_reported_as_inf(self):
        assert sp.simulate_decay(5.0 * np.eye(2), 200.0, 0.1) == math.inf

    def test_decay_links_spectral_verdict(self, rng):
        a = random_hurwitz(rng, 3)
        assert sp.region_stable(a, sp.HalfPlaneLeft()).proved
        t = sp.decay_horizon(a, target=1e-3)
        assert sp.simulate_decay(a, t, 0.005) < 1.0
