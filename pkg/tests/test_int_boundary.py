import unittest

import numpy as np
from parameterized import parameterized

from mcloop.boundary.mechanisms import (
    LigandReceptorParams, TransmembraneParams, make_ligand_receptor, make_transmembrane
)
from mcloop.boundary.statespace import StateSpaceLTI, eval_H
from mcloop.diffusion.channel import BoundaryKind, ComplexFreq
from mcloop.exceptions import DimensionError, InvalidParam, SingularResolvent


class TestStateSpaceLTI(unittest.TestCase):
    def test_first_order_response(self):
        ss = StateSpaceLTI(A=[[-2.0]], B=[[1.0, 0.0]], C=[[3.0], [0.0]], D=np.zeros((2, 2)))
        s = ComplexFreq(1.5)
        self.assertAlmostEqual(eval_H(ss, s)[0, 0], 3.0 / (1.5j + 2.0))

    def test_static_system_returns_feedthrough(self):
        D = [[1.0, 2.0], [3.0, 4.0]]
        ss = StateSpaceLTI.static(D)
        self.assertEqual(ss.n, 0)
        np.testing.assert_array_equal(eval_H(ss, ComplexFreq(5.0)), np.array(D, dtype=complex))
        self.assertEqual(eval_H(ss, ComplexFreq(np.array([1.0, 2.0]))).shape, (2, 2, 2))

    def test_matrices_are_read_only_copies(self):
        A = np.array([[-1.0]])
        ss = StateSpaceLTI(A=A, B=[1.0, 0.0], C=[1.0, 0.0], D=np.zeros((2, 2)))
        A[0, 0] = 5.0
        self.assertEqual(ss.A[0, 0], -1.0)
        with self.assertRaises(ValueError):
            ss.A[0, 0] = 0.0

    @parameterized.expand([
        ("non_square_A", np.zeros((2, 3)), np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2))),
        ("short_B", -np.eye(2), np.zeros((1, 2)), np.zeros((2, 2)), np.zeros((2, 2))),
        ("wide_C", -np.eye(2), np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2))),
        ("bad_D", -np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((3, 2))),
    ])
    def test_dimension_errors(self, _, A, B, C, D):
        with self.assertRaises(DimensionError):
            StateSpaceLTI(A=A, B=B, C=C, D=D)

    def test_singular_resolvent_at_pole(self):
        ss = StateSpaceLTI(A=[[0.0]], B=[1.0, 0.0], C=[1.0, 0.0], D=np.zeros((2, 2)))
        with self.assertRaises(SingularResolvent) as ctx:
            eval_H(ss, ComplexFreq(0.0))
        self.assertEqual(ctx.exception.omega, 0.0)

    def test_vectorized_evaluation(self):
        ss = make_transmembrane(TransmembraneParams(k=2.0, mu=83.0))
        omegas = np.logspace(-3, 3, 7)
        batch = eval_H(ss, ComplexFreq(omegas))
        for i, omega in enumerate(omegas):
            np.testing.assert_allclose(batch[i], eval_H(ss, ComplexFreq(omega)), rtol=1e-14)

    def test_poles(self):
        ss = make_ligand_receptor(LigandReceptorParams(k_on=0.1, k_off=100.0, k_re=1.0, R=1000.0, mu=83.0))
        np.testing.assert_allclose(ss.poles(), [-100.0])
        self.assertTrue(ss.is_hurwitz())


class TestTransmembrane(unittest.TestCase):
    def setUp(self):
        self.params = TransmembraneParams(k=200.0, mu=83.0, dr=1.0)

    def test_realization_entries(self):
        p = self.params
        for omega in (1e-3, 1.0, 1e3):
            s = 1j * omega
            H = eval_H(make_transmembrane(p), ComplexFreq(omega))
            self.assertAlmostEqual(H[0, 0], (p.mu / p.dr) / (s + p.k))
            self.assertAlmostEqual(H[0, 1], p.k / (s + p.k))
            self.assertAlmostEqual(H[1, 0], p.k * p.mu / p.dr / (s + p.k))
            self.assertAlmostEqual(H[1, 1], -p.k * s / (s + p.k))

    def test_half_amplitude_at_sqrt3_k(self):
        H = eval_H(make_transmembrane(self.params), ComplexFreq(np.sqrt(3) * self.params.k))
        self.assertAlmostEqual(abs(H[0, 1]), 0.5)

    def test_dirichlet_tag_and_labels(self):
        ss = make_transmembrane(self.params)
        self.assertIs(ss.boundary, BoundaryKind.DIRICHLET)
        self.assertEqual(ss.labels, (("z0", "c0"), ("v0", "y0")))

    def test_receiver_side_flips_flux(self):
        at_zero = make_transmembrane(self.params, side="0")
        at_L = make_transmembrane(self.params, side="L")
        self.assertEqual(at_L.B[0, 0], -at_zero.B[0, 0])
        self.assertEqual(at_L.labels[1], ("vL", "yL"))
        with self.assertRaises(InvalidParam):
            make_transmembrane(self.params, side="middle")

    @parameterized.expand([("zero_k", 0.0, 83.0, 1.0), ("negative_mu", 1.0, -83.0, 1.0), ("zero_dr", 1.0, 83.0, 0.0)])
    def test_rejects_invalid_params(self, _, k, mu, dr):
        with self.assertRaises(InvalidParam):
            make_transmembrane(TransmembraneParams(k=k, mu=mu, dr=dr))

    def test_zero_rate_allowed_for_simulation(self):
        TransmembraneParams(k=0.0, mu=83.0).check(allow_zero=True)


class TestLigandReceptor(unittest.TestCase):
    def setUp(self):
        self.params = LigandReceptorParams(k_on=0.1, k_off=100.0, k_re=1.0, R=1000.0, mu=83.0)

    def test_realization_entries(self):
        p = self.params
        for omega in (1e-2, 1e2, 1e4):
            s = 1j * omega
            H = eval_H(make_ligand_receptor(p), ComplexFreq(omega))
            self.assertAlmostEqual(H[0, 0], (p.R * p.k_on / p.mu) * s / (s + p.k_off))
            self.assertAlmostEqual(H[1, 0], p.k_re * p.k_on / (s + p.k_off))
            self.assertEqual(H[0, 1], 0)
            self.assertEqual(H[1, 1], 0)

    def test_unit_receptor_count_gives_textbook_matrices(self):
        p = LigandReceptorParams(k_on=0.1, k_off=100.0, k_re=1.0, R=1.0, mu=83.0)
        ss = make_ligand_receptor(p)
        np.testing.assert_allclose(ss.C, [[-p.k_off / p.mu], [p.k_re]])
        np.testing.assert_allclose(ss.D, [[p.k_on / p.mu, 0.0], [0.0, 0.0]])
        self.assertIs(ss.boundary, BoundaryKind.NEUMANN)

    def test_high_pass_cutoff(self):
        p = self.params
        gain = abs(eval_H(make_ligand_receptor(p), ComplexFreq(p.k_off / np.sqrt(3)))[0, 0])
        self.assertAlmostEqual(gain / (p.R * p.k_on / p.mu), 0.5)

    def test_rejects_negative_rate(self):
        with self.assertRaises(InvalidParam):
            make_ligand_receptor(LigandReceptorParams(k_on=-0.1, k_off=100.0, k_re=1.0, R=1000.0, mu=83.0))


class TestBoundaryProperties(unittest.TestCase):
    def setUp(self):
        self.omegas = np.logspace(-4, 4, 17)

    @parameterized.expand([
        ("transmembrane", make_transmembrane(TransmembraneParams(k=200.0, mu=83.0, dr=1.0))),
        ("transmembrane_at_L", make_transmembrane(TransmembraneParams(k=5e-2, mu=83.0, dr=1.0), side="L")),
        ("ligand_receptor", make_ligand_receptor(
            LigandReceptorParams(k_on=0.1, k_off=100.0, k_re=1.0, R=1000.0, mu=83.0))),
    ])
    def test_conjugate_symmetry(self, _, ss):
        s = ComplexFreq(self.omegas)
        # entries that cancel near DC are compared on the scale of the realization
        scale = np.abs(ss.D).max() + np.abs(ss.C @ ss.B).max() / np.abs(ss.A).min()
        np.testing.assert_allclose(eval_H(ss, s.mirrored()), np.conj(eval_H(ss, s)), rtol=1e-13, atol=1e-13 * scale)

    @parameterized.expand([("double", 2.0), ("tenfold", 10.0), ("tenth", 0.1)])
    def test_receptor_count_scales_feedback_only(self, _, factor):
        base = LigandReceptorParams(k_on=0.1, k_off=100.0, k_re=1.0, R=1000.0, mu=83.0)
        scaled = LigandReceptorParams(k_on=0.1, k_off=100.0, k_re=1.0, R=1000.0 * factor, mu=83.0)
        s = ComplexFreq(self.omegas)
        H = eval_H(make_ligand_receptor(base), s)
        H_scaled = eval_H(make_ligand_receptor(scaled), s)
        high_pass_gain = scaled.R * scaled.k_on / scaled.mu
        np.testing.assert_allclose(H_scaled[:, 0, 0], factor * H[:, 0, 0], rtol=1e-12, atol=1e-12 * high_pass_gain)
        np.testing.assert_array_equal(H_scaled[:, 1, 0], H[:, 1, 0])

    def test_resolvent_matches_first_order_formula(self):
        rng = np.random.default_rng(20250611)
        ks = 10 ** rng.uniform(-3, 3, 100)
        omegas = 10 ** rng.uniform(-4, 4, 100)
        for k, omega in zip(ks, omegas):
            p = TransmembraneParams(k=float(k), mu=83.0, dr=1.0)
            H = eval_H(make_transmembrane(p), ComplexFreq(float(omega)))
            s = 1j * omega
            np.testing.assert_allclose(H[0, 0], p.mu / (s + k), rtol=1e-12)
            np.testing.assert_allclose(H[0, 1], k / (s + k), rtol=1e-12)
            np.testing.assert_allclose(H[1, 0], k * p.mu / (s + k), rtol=1e-12)
            # -k + k^2 / (s + k) cancels when |s| << k; compare on the scale of k
            np.testing.assert_allclose(H[1, 1], -k * s / (s + k), rtol=1e-12, atol=1e-12 * k)


if __name__ == "__main__":
    unittest.main()
