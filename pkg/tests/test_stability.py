"""Basis stability certificate, stable best/worst values, square
absolute-value systems."""

import warnings

import numpy as np
import pytest

from avlprange import (
    AvlpProblem,
    Basis,
    CertificateStatus,
    GaveSystem,
    InputError,
    IntervalMatrix,
    IntervalVector,
    SizeCapError,
    StabilityCertificate,
    Status,
    best_case_bstable,
    bstable_characterizations,
    solve_gave,
    verify_b_stability,
    worst_case_bstable,
)

from oracles import gave_solutions, random_gave, random_stable_problem

WORST_EX4 = 19.81264637002342


class TestBasis:
    def test_one_based_conversion(self):
        assert Basis.from_one_based((1, 2)).rows == (0, 1)

    def test_iteration_and_len(self):
        b = Basis((0, 3))
        assert list(b) == [0, 3]
        assert len(b) == 2

    def test_complement(self):
        assert list(Basis((0, 2)).complement(4)) == [1, 3]

    def test_duplicates_rejected(self):
        with pytest.raises(InputError):
            Basis((1, 1))

    def test_negative_rejected(self):
        with pytest.raises(InputError):
            Basis((-1, 0))


class TestCertificate:
    def test_example4_basis_is_verified_nondegenerate(self, example4):
        cert = verify_b_stability(example4, Basis((0, 1)))
        assert cert.status is CertificateStatus.VERIFIED_NONDEGENERATE
        assert cert.regularity is not None and cert.regularity.verified
        assert cert.primal_margin == pytest.approx(0.4334, abs=1e-3)
        assert cert.dual_margin == pytest.approx(0.1021, abs=1e-3)
        box = cert.primal_enclosure
        assert np.allclose(box.inf, [2.2839, 4.4845], atol=1e-3)
        assert np.allclose(box.sup, [9.7894, 11.4356], atol=1e-3)

    def test_wrong_basis_fails_the_nonbasic_check(self, example4):
        cert = verify_b_stability(example4, Basis((0, 2)))
        assert cert.status is CertificateStatus.UNKNOWN
        assert "not verifiably satisfied" in cert.reason

    def test_basis_size_checked(self, example4):
        with pytest.raises(InputError):
            verify_b_stability(example4, Basis((0, 1, 2)))

    def test_basis_range_checked(self, example4):
        with pytest.raises(InputError):
            verify_b_stability(example4, Basis((0, 7)))


class TestStableValues:
    def test_best_matches_global_best(self, example4):
        cert = verify_b_stability(example4, Basis((0, 1)))
        value = best_case_bstable(example4, Basis((0, 1)), certificate=cert)
        assert value == pytest.approx(22.31935771632471, abs=1e-9)

    def test_worst_value_point_and_witness(self, example4):
        cert = verify_b_stability(example4, Basis((0, 1)))
        value, x_star, witness = worst_case_bstable(
            example4, Basis((0, 1)), certificate=cert
        )
        assert value == pytest.approx(WORST_EX4, abs=1e-9)
        assert np.allclose(x_star, [3.0444964871194378, 8.38407494145199], atol=1e-9)
        assert example4.A.contains(witness.A)
        assert example4.b.contains(witness.b)
        assert example4.c.contains(witness.c)
        assert example4.D.contains(witness.D)
        out = witness.solve()
        assert out.status is Status.OPTIMAL
        assert out.value == pytest.approx(value, abs=1e-9)

    def test_missing_certificate_warns(self, example4):
        with pytest.warns(UserWarning, match="no stability certificate"):
            best_case_bstable(example4, Basis((0, 1)))

    def test_verified_certificate_does_not_warn(self, example4):
        cert = verify_b_stability(example4, Basis((0, 1)))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            best_case_bstable(example4, Basis((0, 1)), certificate=cert)

    def test_merely_verified_certificate_warns_for_worst(self, example4):
        weak = StabilityCertificate(status=CertificateStatus.VERIFIED)
        with pytest.warns(UserWarning, match="nondegenerate"):
            worst_case_bstable(example4, Basis((0, 1)), certificate=weak)

    def test_characterizations_coincide(self, example4):
        ch = bstable_characterizations(example4, Basis((0, 1)))
        for value in (ch.min_at_least, ch.max_at_most, ch.max_at_equality, ch.min_at_equality):
            assert value == pytest.approx(WORST_EX4, abs=1e-6)

    def test_characterization_orderings_on_random_instances(self):
        rng = np.random.default_rng(70)
        seen = 0
        while seen < 10:
            problem, rows = random_stable_problem(rng)
            cert = verify_b_stability(problem, Basis(rows))
            if cert.status is not CertificateStatus.VERIFIED_NONDEGENERATE:
                continue
            seen += 1
            ch = bstable_characterizations(problem, Basis(rows))
            # the equality set sits inside both one-sided sets
            assert ch.min_at_least <= ch.min_at_equality + 1e-9
            assert ch.max_at_most >= ch.max_at_equality - 1e-9
            assert ch.min_at_equality <= ch.max_at_equality + 1e-9


class TestGave:
    def test_scalar_expansion(self):
        x = solve_gave(GaveSystem(M=[[1.0]], F=[[0.5]], g=[3.0]))
        assert np.allclose(x, [2.0], atol=1e-12)

    def test_scalar_contraction(self):
        x = solve_gave(GaveSystem(M=[[1.0]], F=[[-0.5]], g=[1.0]))
        assert np.allclose(x, [2.0], atol=1e-12)

    def test_negative_branch(self):
        # x + 0.5|x| = -3 forces x < 0
        x = solve_gave(GaveSystem(M=[[1.0]], F=[[0.5]], g=[-3.0]))
        assert np.allclose(x, [-6.0], atol=1e-12)

    def test_ambiguous_system_warns_and_picks_sign_consistent_solution(self):
        with pytest.warns(UserWarning, match="uniqueness"):
            x = solve_gave(GaveSystem(M=np.eye(2), F=2.0 * np.eye(2), g=[3.0, 3.0]))
        assert np.allclose(x, [1.0, 1.0], atol=1e-12)

    def test_residual_contract(self):
        rng = np.random.default_rng(71)
        for _ in range(30):
            M, F, g = random_gave(rng)
            x = solve_gave(GaveSystem(M=M, F=F, g=g))
            residual = np.max(np.abs(M @ x + F @ np.abs(x) - g))
            assert residual <= 1e-8 * (1.0 + np.max(np.abs(g)))

    def test_agrees_with_exhaustive_enumeration(self):
        rng = np.random.default_rng(72)
        for _ in range(60):
            M, F, g = random_gave(rng)
            sols = gave_solutions(M, F, g)
            assert len(sols) == 1
            x = solve_gave(GaveSystem(M=M, F=F, g=g))
            assert np.allclose(x, sols[0], atol=1e-7)

    def test_size_cap_when_enumeration_is_needed(self):
        n = 17
        system = GaveSystem(M=np.zeros((n, n)), F=np.eye(n), g=np.ones(n))
        with pytest.warns(UserWarning):
            with pytest.raises(SizeCapError):
                solve_gave(system)

    def test_nonsquare_rejected(self):
        with pytest.raises(InputError):
            GaveSystem(M=np.ones((2, 3)), F=np.ones((2, 3)), g=np.ones(2))


def test_stable_worst_matches_global_lower_bound():
    from avlprange import worst_lower_bound

    rng = np.random.default_rng(73)
    seen = 0
    while seen < 15:
        problem, rows = random_stable_problem(rng)
        cert = verify_b_stability(problem, Basis(rows))
        if cert.status is not CertificateStatus.VERIFIED_NONDEGENERATE:
            continue
        seen += 1
        value, _, witness = worst_case_bstable(problem, Basis(rows), certificate=cert)
        assert abs(value - worst_lower_bound(problem)) <= 1e-6 * (1.0 + abs(value))
        assert witness.solve().value == pytest.approx(value, abs=1e-7)
