import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartan_entropy import (
    ActionCase,
    DegenerateArrangement,
    FieldElement,
    IntPolynomial,
    NotCommuting,
    NotUnimodular,
    NumberField,
    ReducibleCharPoly,
    UnitSystem,
    classify,
    entropy_of_element,
    find_real_roots,
    from_unit_system,
    lyapunov_matrix,
    verify_action,
    weyl_chambers,
)

GOLDEN = [[2, 1], [1, 1]]
SWAP = [[0, 1], [1, 0]]
IDENT = [[1, 0], [0, 1]]


class TestFromUnitSystem:
    def test_sqrt3_unit_matrix(self):
        f = IntPolynomial((-3, 0, 1))
        emb = find_real_roots(f)
        nf = NumberField(f, emb)
        unit = FieldElement.from_ints([2, 1])
        x = np.column_stack([nf.log_vector(unit)])
        us = UnitSystem(f=f, embeddings=emb, units=(unit,), log_matrix=x,
                        regulator=float(abs(x[0, 0])))
        act = from_unit_system(f, us)
        mat = [[int(v) for v in row] for row in act.matrices[0]]
        assert mat == [[2, 3], [1, 2]]

    def test_unit_one_gives_identity(self):
        f = IntPolynomial((-3, 0, 1))
        emb = find_real_roots(f)
        nf = NumberField(f, emb)
        unit = FieldElement.from_ints([2, 1])
        one = FieldElement.from_ints([1, 0])
        x = np.column_stack([nf.log_vector(unit), nf.log_vector(one)])
        us = UnitSystem(f=f, embeddings=emb, units=(unit, one), log_matrix=x,
                        regulator=float(abs(x[0, 0])))
        act = from_unit_system(f, us)
        ident = [[int(v) for v in row] for row in act.matrices[1]]
        assert ident == [[1, 0], [0, 1]]

    def test_quartic_generator_gives_companion_matrix(self, us725):
        act = from_unit_system(us725.f, us725)
        lam_idx = next(
            i for i, u in enumerate(us725.units)
            if tuple(int(c) for c in u.coeffs) == (0, 1, 0, 0))
        companion = np.array(act.matrices[lam_idx], dtype=int)
        # last column carries minus the constant-first coefficients
        expected = np.zeros((4, 4), dtype=int)
        expected[1:, :3] = np.eye(3, dtype=int)
        expected[:, 3] = [-c for c in us725.f.coeffs[:4]]
        assert np.array_equal(companion, expected) or np.array_equal(
            companion.T, expected)
        assert round(np.linalg.det(companion)) == 1

    def test_matrices_are_unimodular_and_commute(self, us300125):
        act = from_unit_system(us300125.f, us300125)
        mats = [np.array(m, dtype=object) for m in act.matrices]
        for m in mats:
            d = round(float(np.linalg.det(np.array(m, dtype=float))))
            assert d in (1, -1)
        for a in mats:
            for b in mats:
                assert np.array_equal(a @ b, b @ a)

    def test_eigenvalues_match_embedded_units(self, us725):
        act = from_unit_system(us725.f, us725)
        roots = us725.embeddings.roots
        for i, m in enumerate(act.matrices):
            eig = np.sort(np.abs(np.linalg.eigvals(np.array(m, float))))
            unit = us725.units[i]
            embedded = np.sort(np.abs([
                sum(float(c) * r**j for j, c in enumerate(unit.coeffs))
                for r in roots]))
            assert np.abs(eig - embedded).max() <= 1e-8


class TestVerifyAction:
    def test_golden_matrix_valid(self):
        diag = verify_action([GOLDEN])
        assert diag.action.n == 2
        assert diag.action.k == 1
        eig = sorted(np.linalg.eigvals(np.array(GOLDEN, float)))
        assert eig == pytest.approx(
            [(3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2], abs=1e-12)

    def test_identity_generator_allowed(self):
        diag = verify_action([GOLDEN, IDENT])
        assert diag.commuting

    def test_non_commuting_rejected(self):
        with pytest.raises(NotCommuting):
            verify_action([GOLDEN, SWAP])

    def test_non_unimodular_rejected(self):
        with pytest.raises(NotUnimodular):
            verify_action([[[2, 0], [0, 2]]])

    def test_reducible_first_generator_rejected(self):
        with pytest.raises(ReducibleCharPoly):
            verify_action([SWAP])

    def test_diagonalization_residual_small(self, us725):
        act = from_unit_system(us725.f, us725)
        # anchor the eigenbasis on a generator with distinct eigenvalues
        mats = sorted(
            act.matrices,
            key=lambda m: tuple(int(c) for c in us725.units[
                act.matrices.index(m)].coeffs) != (0, 1, 0, 0))
        diag = verify_action(mats)
        assert diag.diagonalization_residual <= 1e-9


class TestLyapunovMatrix:
    def test_golden_column(self):
        diag = verify_action([GOLDEN])
        x = lyapunov_matrix(diag.action)
        phi2 = math.log((3 + math.sqrt(5)) / 2)
        col = sorted(x[:, 0])
        assert col == pytest.approx([-phi2, phi2], abs=1e-12)

    def test_disc_725_minors_give_regulator(self, us725):
        act = from_unit_system(us725.f, us725)
        x = lyapunov_matrix(act)
        for j in range(4):
            minor = abs(np.linalg.det(np.delete(x, j, axis=0)))
            assert minor == pytest.approx(0.825068, abs=1e-4)

    def test_identity_slot_gives_zero_column(self):
        diag = verify_action([GOLDEN, IDENT])
        x = lyapunov_matrix(diag.action)
        assert np.abs(x[:, 1]).max() <= 1e-12

    def test_column_sums_vanish(self, us300125):
        act = from_unit_system(us300125.f, us300125)
        x = lyapunov_matrix(act)
        assert np.abs(x.sum(axis=0)).max() <= 1e-9


class TestClassify:
    def test_full_rank_action_is_case_p(self, x725):
        assert classify(x725) is ActionCase.P

    def test_rank_deficit_is_case_o(self, x49):
        padded = np.column_stack([x49, np.zeros(3)])
        assert classify(padded) is ActionCase.O

    def test_single_golden_generator_is_case_p(self, golden_x):
        assert classify(golden_x) is ActionCase.P


class TestWeylChambers:
    def test_cubic_has_six(self, x49):
        assert len(weyl_chambers(x49)) == 6

    def test_quartic_has_fourteen(self, x725):
        assert len(weyl_chambers(x725)) == 14

    def test_quintic_has_thirty(self, x14641):
        assert len(weyl_chambers(x14641)) == 30

    def test_all_plus_never_realized(self, x49, x725, x14641):
        for x in (x49, x725, x14641):
            patterns = {p for p, _ in weyl_chambers(x)}
            n = x.shape[0]
            assert (1,) * n not in patterns
            assert (-1,) * n not in patterns

    def test_witnesses_certify_their_patterns(self, x725):
        for pattern, witness in weyl_chambers(x725):
            signs = np.sign(x725 @ witness)
            assert tuple(int(s) for s in signs) == pattern

    def test_proportional_functionals_rejected(self):
        x = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]])
        with pytest.raises(DegenerateArrangement):
            weyl_chambers(x)

    def test_deterministic(self, x49):
        first = weyl_chambers(x49)
        second = weyl_chambers(x49)
        assert [p for p, _ in first] == [p for p, _ in second]


class TestEntropyOfElement:
    def test_zero_vector(self, x725):
        assert entropy_of_element(x725, [0, 0, 0]) == 0.0

    def test_golden_generator(self, golden_x):
        val = entropy_of_element(golden_x, [1])
        assert val == pytest.approx(math.log((3 + math.sqrt(5)) / 2),
                                    abs=1e-12)

    @given(st.integers(-20, 20),
           st.tuples(st.integers(-5, 5), st.integers(-5, 5),
                     st.integers(-5, 5)))
    @settings(max_examples=60, deadline=None)
    def test_homogeneity(self, c, m):
        x = _X725
        base = entropy_of_element(x, m)
        scaled = entropy_of_element(x, [c * v for v in m])
        assert scaled == pytest.approx(abs(c) * base, rel=1e-12, abs=1e-12)

    @given(st.tuples(st.integers(-5, 5), st.integers(-5, 5),
                     st.integers(-5, 5)),
           st.tuples(st.integers(-5, 5), st.integers(-5, 5),
                     st.integers(-5, 5)))
    @settings(max_examples=60, deadline=None)
    def test_subadditivity(self, m1, m2):
        x = _X725
        total = entropy_of_element(x, [a + b for a, b in zip(m1, m2)])
        assert total <= (entropy_of_element(x, m1)
                         + entropy_of_element(x, m2) + 1e-9)


def _load_x725():
    from cartan_entropy import unit_system_for
    us = unit_system_for(IntPolynomial((1, 1, -3, -1, 1)))
    return np.asarray(us.log_matrix, dtype=float)


_X725 = _load_x725()
