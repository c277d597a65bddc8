import numpy as np
import pytest

from nls_szego import (
    Grid,
    HardyField,
    InvalidArgumentError,
    SpectralField,
    hdot_norm,
    hs_norm,
    inner_product,
    lp_norm,
    momentum,
    phase_rotate,
    projected_nonlinearity,
    qplus,
    read_snapshot,
    spectral_derivative,
    szego_project,
    time_reflect,
    translate,
    write_snapshot,
)
from conftest import random_field, random_hardy

REL = 1e-12


def l2(f):
    return lp_norm(f, 2)


class TestRepresentations:
    def test_parseval_consistency(self, small_grid):
        f = random_field(small_grid, 1)
        spatial = np.sum(np.abs(f.samples) ** 2) * small_grid.dx
        spectral = np.sum(np.abs(f.coefficients) ** 2) / small_grid.length
        assert spatial == pytest.approx(spectral, rel=REL)

    def test_roundtrip_samples_coefficients(self, small_grid):
        f = random_field(small_grid, 2)
        g = SpectralField(small_grid, samples=f.samples)
        assert np.allclose(g.coefficients, f.coefficients, rtol=1e-12, atol=1e-12)

    def test_single_mode_coefficient_value(self, circle_grid):
        # u = e^{3ix} on L=2pi: u_hat(3) = L, all others 0
        u = np.exp(3j * circle_grid.x)
        f = SpectralField(circle_grid, samples=u)
        c = f.coefficients
        idx = np.argmin(np.abs(circle_grid.k - 3))
        assert c[idx] == pytest.approx(circle_grid.length, rel=1e-12)
        c2 = c.copy()
        c2[idx] = 0
        assert np.abs(c2).max() < 1e-12 * circle_grid.length

    def test_fields_are_immutable(self, small_grid):
        f = random_field(small_grid, 3)
        with pytest.raises(ValueError):
            f.samples[0] = 0
        with pytest.raises(ValueError):
            f.coefficients[0] = 0


class TestSzegoProjector:
    def test_positive_mode_unchanged(self, circle_grid):
        f = SpectralField(circle_grid, samples=np.exp(2j * circle_grid.x))
        pf = szego_project(f)
        assert np.allclose(pf.samples, f.samples, atol=1e-12)

    def test_cosine_keeps_positive_half(self, circle_grid):
        f = SpectralField(circle_grid, samples=2 * np.cos(3 * circle_grid.x))
        pf = szego_project(f)
        assert np.allclose(pf.samples, np.exp(3j * circle_grid.x), atol=1e-12)

    def test_idempotent_exactly(self, small_grid):
        f = random_field(small_grid, 4)
        once = szego_project(f)
        twice = szego_project(once)
        assert np.array_equal(once.coefficients, twice.coefficients)

    def test_self_adjoint_and_contractive(self, small_grid):
        f = random_field(small_grid, 5)
        g = random_field(small_grid, 6)
        lhs = inner_product(szego_project(f), g)
        rhs = inner_product(f, szego_project(g))
        assert lhs == pytest.approx(rhs, rel=1e-12)
        assert l2(szego_project(f)) <= l2(f) * (1 + 1e-15)

    def test_gaussian_loses_half_its_mass(self):
        # oracle: direct summation over the discrete spectrum
        g = Grid(2 ** 12, 80.0)
        f = SpectralField(g, samples=np.exp(-g.x ** 2))
        c = f.coefficients
        expected = np.sum(np.abs(c[g.k >= 0]) ** 2) / g.length
        got = l2(szego_project(f)) ** 2
        assert got == pytest.approx(expected, rel=1e-14)
        # the k = 0 mode is kept in full, so the ratio sits just above 1/2
        ratio = got / l2(f) ** 2
        assert 0.5 < ratio < 0.5 + 5 / g.length

    def test_hardy_invariant_enforced(self, small_grid):
        f = random_field(small_grid, 7)
        with pytest.raises(InvalidArgumentError):
            HardyField(small_grid, coefficients=f.coefficients)


class TestDerivativeTranslatePhase:
    def test_identity_at_zero_order(self, small_grid):
        f = random_field(small_grid, 8)
        assert np.array_equal(spectral_derivative(f, 0).coefficients, f.coefficients)

    def test_eigenfunction(self, circle_grid):
        f = SpectralField(circle_grid, samples=np.exp(3j * circle_grid.x))
        df = spectral_derivative(f, 1, signed=True)
        assert np.allclose(df.samples, 3 * f.samples, atol=1e-12)

    def test_signed_requires_order_one(self, small_grid):
        with pytest.raises(InvalidArgumentError):
            spectral_derivative(random_field(small_grid, 9), 2, signed=True)

    def test_half_derivative_of_exponential_profile(self):
        # |D|^{1/2} squared norm of the Q+ profile: (1/2pi) int 4 pi^2 k e^{-2k} dk = pi/2
        g = Grid(2 ** 14, 1000.0)
        f = qplus(g)
        val = hdot_norm(f, 0.5) ** 2
        assert val == pytest.approx(np.pi / 2, rel=1e-3)

    def test_translate_phase_law(self, circle_grid):
        f = SpectralField(circle_grid, samples=np.exp(2j * circle_grid.x))
        shifted = translate(f, 0.7)
        assert np.allclose(shifted.samples, np.exp(2j * 0.7) * f.samples, atol=1e-12)

    def test_translate_is_identity_at_zero(self, small_grid):
        f = random_field(small_grid, 10)
        assert translate(f, 0.0) is f

    def test_translate_unitary_all_sobolev(self, small_grid):
        f = random_field(small_grid, 11)
        sh = translate(f, 1.7)
        for s in (0.0, 0.5, 1.0):
            assert hs_norm(sh, s) == pytest.approx(hs_norm(f, s), rel=1e-12)

    def test_phase_rotation_unitary(self, small_grid):
        f = random_field(small_grid, 12)
        r = phase_rotate(f, 1.1)
        for s in (0.0, 0.5, 1.0):
            assert hs_norm(r, s) == pytest.approx(hs_norm(f, s), rel=1e-12)

    def test_time_reflect_is_conjugate_reflection(self, small_grid):
        f = random_field(small_grid, 13)
        r = time_reflect(f)
        expected = np.conj(np.concatenate([f.samples[:1], f.samples[1:][::-1]]))
        assert np.allclose(r.samples, expected, atol=1e-12)


class TestNorms:
    def test_lorentzian_l2_oracle(self):
        # int dx/(1+x^2) = pi, tail-limited at O(1/L)
        g = Grid(2 ** 15, 1000.0)
        f = qplus(g, zero_mode="corrected")
        assert l2(f) ** 2 == pytest.approx(np.pi, rel=1e-3)

    def test_lorentzian_l6_oracle(self):
        # int dx/(1+x^2)^3 = 3 pi/8
        g = Grid(2 ** 15, 1000.0)
        f = qplus(g, zero_mode="corrected")
        assert lp_norm(f, 6) ** 6 == pytest.approx(3 * np.pi / 8, rel=1e-3)

    def test_zero_field(self, small_grid):
        z = SpectralField(small_grid, samples=np.zeros(small_grid.n))
        for p in (2, 6, np.inf):
            assert lp_norm(z, p) == 0.0

    def test_unsupported_exponent(self, small_grid):
        with pytest.raises(InvalidArgumentError):
            lp_norm(random_field(small_grid, 14), 3)

    def test_linf_single_mode(self, circle_grid):
        f = SpectralField(circle_grid, samples=2.5 * np.exp(1j * circle_grid.x))
        assert lp_norm(f, np.inf) == pytest.approx(2.5, rel=1e-12)


class TestInnerProductMomentum:
    def test_self_pairing_is_l2(self, small_grid):
        f = random_field(small_grid, 15)
        assert inner_product(f, f).real == pytest.approx(l2(f) ** 2, rel=1e-12)
        assert abs(inner_product(f, f).imag) < 1e-12 * l2(f) ** 2

    def test_orthogonal_modes(self, circle_grid):
        f = SpectralField(circle_grid, samples=np.exp(1j * circle_grid.x))
        g = SpectralField(circle_grid, samples=np.exp(2j * circle_grid.x))
        assert abs(inner_product(f, g)) < 1e-12

    def test_conjugate_symmetry(self, small_grid):
        f = random_field(small_grid, 16)
        g = random_field(small_grid, 17)
        assert inner_product(f, g) == pytest.approx(np.conj(inner_product(g, f)), rel=1e-12)

    def test_grid_mismatch_rejected(self, small_grid, circle_grid):
        with pytest.raises(InvalidArgumentError):
            inner_product(random_field(small_grid, 18), random_field(circle_grid, 18))

    def test_momentum_of_qplus(self):
        # <D Q+, Q+> = (1/2pi) int 4 pi^2 k e^{-2k} dk = pi/2
        g = Grid(2 ** 15, 1000.0)
        f = qplus(g)
        assert momentum(f) == pytest.approx(np.pi / 2, rel=1e-3)
        df = spectral_derivative(f, 1, signed=True)
        assert momentum(f) == pytest.approx(inner_product(df, f).real, rel=1e-12)

    def test_momentum_trivial_cases(self, small_grid):
        const = HardyField(small_grid, coefficients=np.eye(small_grid.n)[0] + 0j)
        assert momentum(const) == 0.0
        g = Grid(64, 2 * np.pi)
        mode = SpectralField(g, samples=np.exp(3j * g.x))
        mode = szego_project(mode)
        unit = HardyField(g, coefficients=mode.coefficients / l2(mode))
        assert momentum(unit) == pytest.approx(3.0, rel=1e-12)


class TestProjectedNonlinearity:
    def test_unimodular_mode_fixed(self, circle_grid):
        f = szego_project(SpectralField(circle_grid, samples=np.exp(1j * circle_grid.x)))
        out = projected_nonlinearity(f, 2)
        assert np.allclose(out.samples, f.samples, atol=1e-10)

    def test_zero_field(self, small_grid):
        z = HardyField(small_grid, coefficients=np.zeros(small_grid.n))
        assert np.abs(projected_nonlinearity(z, 2).coefficients).max() == 0.0

    def test_qplus_sextic_pairing(self):
        # <Pi(|Q|^4 Q), Q> = ||Q||_6^6 = 3 pi/8 for the corrected profile
        g = Grid(2 ** 15, 1000.0)
        f = qplus(g, zero_mode="corrected")
        val = inner_product(projected_nonlinearity(f, 2), f).real
        assert val == pytest.approx(3 * np.pi / 8, rel=1e-3)

    def test_agrees_with_dense_quadrature_oracle(self, small_grid):
        # oracle: 8x refinement without the padding shortcut, then projection
        from nls_szego.field import resample
        f = random_hardy(small_grid, 19, band=small_grid.k.max() / 8)
        out = projected_nonlinearity(f, 2)
        fine = resample(f, 8)
        v = np.abs(fine) ** 4 * fine
        gfine = Grid(8 * small_grid.n, small_grid.length)
        vf = SpectralField(gfine, samples=v)
        oracle = vf.coefficients[
            [int(np.argmin(np.abs(gfine.k - kk))) for kk in small_grid.k]]
        oracle = np.where(small_grid.k < 0, 0.0, oracle)
        rel = np.abs(out.coefficients - oracle).max() / np.abs(oracle).max()
        assert rel < 1e-10

    def test_invariance_under_hardy_preservation(self, small_grid):
        f = random_hardy(small_grid, 20)
        out = projected_nonlinearity(f, 1)
        assert np.abs(out.coefficients[small_grid.negative_modes]).max() == 0.0

    def test_pad_overflow_reports_required_size(self):
        g = Grid(2 ** 15, 100.0)
        f = HardyField(g, coefficients=np.zeros(g.n))
        with pytest.raises(InvalidArgumentError, match="exceeds"):
            projected_nonlinearity(f, 2000)


class TestInterpolationInequality:
    def test_discrete_cauchy_schwarz(self, small_grid):
        for seed in range(5):
            f = random_hardy(small_grid, 100 + seed)
            lhs = hdot_norm(f, 0.5) ** 2
            rhs = lp_norm(f, 2) * hdot_norm(f, 1.0)
            assert lhs <= rhs + 1e-10


class TestSnapshotIO:
    def test_roundtrip(self, tmp_path, small_grid):
        f = random_field(small_grid, 21)
        path = tmp_path / "field.txt"
        write_snapshot(f, path, t=1.25)
        g, t = read_snapshot(path)
        assert t == 1.25
        assert g.grid == small_grid
        assert np.allclose(g.samples, f.samples, rtol=1e-15, atol=1e-15)

    def test_rejects_unknown_version(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("# nls-szego field v2\nn=16 length=1 t=0\n")
        with pytest.raises(InvalidArgumentError):
            read_snapshot(path)
