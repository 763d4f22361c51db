import numpy as np
import pytest

from isolab import (BrownianBlock, CapacityExceeded, DenseOperator,
                    DomainMismatch, LazyIsometry, NotNilpotent, OddDimension,
                    ScalarOperator, apply, compressed_gram, defect_form,
                    defect_report, direct_sum_power, gram_matrix, lazy_extend,
                    random_2nilpotent, read_operator,
                    three_isometry_from_nilpotent, write_operator)

from conftest import make_space, vec


class TestDenseOperator:
    def test_plain_matrix_apply(self):
        T = DenseOperator([[2, 1], [0, 2]])
        np.testing.assert_allclose(T.apply([1, 0]), [2, 0])

    def test_attached_apply(self):
        sp = make_space(2)
        T = DenseOperator([[2, 1], [0, 2]], sp, sp.labels["H1"])
        out = T.apply(vec(sp, [1, 0]))
        np.testing.assert_allclose(out.coords[:2], [2, 0])

    def test_rejects_support_outside_domain(self):
        sp = make_space(2, capacity=4)
        sp.allocate(1)
        T = DenseOperator([[2, 1], [0, 2]], sp, sp.labels["H1"])
        with pytest.raises(DomainMismatch):
            T.apply(sp.basis_vector(2))

    def test_operator_norm_is_largest_singular_value(self, rng):
        M = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert DenseOperator(M).operator_norm == pytest.approx(
            np.linalg.svd(M, compute_uv=False).max())


class TestLazyIsometry:
    def test_defined_span_is_linear(self):
        sp = make_space(2, capacity=8)
        sp.allocate(2)
        R = LazyIsometry(sp, inputs=[sp.basis_vector(0), sp.basis_vector(1)],
                         outputs=[sp.basis_vector(2), sp.basis_vector(3)])
        x = vec(sp, [3, 4j])
        out = R.apply(x)
        assert out.norm() == pytest.approx(x.norm())
        np.testing.assert_allclose(out.coords[2:4], [3, 4j])
        assert R.defined_count == 2

    def test_fresh_direction_gets_fresh_coordinate(self):
        sp = make_space(1, capacity=4)
        R = LazyIsometry(sp)
        x = 2.0 * sp.basis_vector(0)
        out = lazy_extend(R, x)
        assert out.norm() == pytest.approx(2.0)
        assert abs(out.coords[1]) == pytest.approx(2.0)  # coordinate 1 is fresh

    def test_half_defined_superposition(self):
        # (v1 + v2)/sqrt(2) with v1 defined, v2 fresh: image (w1 + w2)/sqrt(2)
        sp = make_space(2, capacity=8)
        sp.allocate(1)
        w1 = sp.basis_vector(2)
        R = LazyIsometry(sp, inputs=[sp.basis_vector(0)], outputs=[w1])
        x = (sp.basis_vector(0) + sp.basis_vector(1)) * (1 / np.sqrt(2))
        out = R.apply(x)
        assert out.norm() == pytest.approx(1.0)
        assert w1.inner(out) == pytest.approx(1 / np.sqrt(2))
        W = R.defined_outputs
        G = np.conj(W) @ W.T
        assert np.max(np.abs(G - np.eye(2))) <= 1e-12

    def test_inner_products_preserved(self, rng):
        sp = make_space(4, capacity=32)
        R = LazyIsometry(sp)
        for _ in range(20):
            a = vec(sp, rng.standard_normal(4) + 1j * rng.standard_normal(4))
            b = vec(sp, rng.standard_normal(4) + 1j * rng.standard_normal(4))
            lhs = R.apply(a).inner(R.apply(b))
            rhs = a.inner(b)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))

    def test_capacity_exceeded(self):
        sp = make_space(2, capacity=2)
        R = LazyIsometry(sp)
        with pytest.raises(CapacityExceeded):
            R.apply(sp.basis_vector(0))

    def test_rejects_non_orthonormal_seed(self):
        sp = make_space(2, capacity=8)
        with pytest.raises(ValueError):
            LazyIsometry(sp, inputs=[vec(sp, [1, 1])],
                         outputs=[sp.basis_vector(0)])


class TestBrownianBlock:
    def test_identity_block(self):
        # V = 0, K the whole instantiated span: B acts as the identity
        sp = make_space(2)
        basis = [sp.basis_vector(0), sp.basis_vector(1)]
        B = BrownianBlock(LazyIsometry(sp), K_basis=basis,
                          V_images=[sp.zero(), sp.zero()])
        x = vec(sp, [1, 2j])
        np.testing.assert_allclose(B.apply(x).coords, x.coords, atol=1e-14)
        assert B.operator_norm == pytest.approx(1.0)

    def test_hypothesis_violation_rejected(self):
        # V image parallel to a defined R output
        sp = make_space(2, capacity=8)
        sp.allocate(2)
        R = LazyIsometry(sp, inputs=[sp.basis_vector(2)],
                         outputs=[sp.basis_vector(3)])
        with pytest.raises(ValueError):
            BrownianBlock(R, K_basis=[sp.basis_vector(0)],
                          V_images=[sp.basis_vector(3)])


class TestDefectForm:
    def test_identity_order2(self):
        B = ScalarOperator(1.0)
        assert defect_form(B, np.array([1.0, 2.0]), 2) == pytest.approx(0.0)

    def test_twice_identity_hand_value(self):
        # 1 - 2*4 + 16 = 9 on a unit vector
        B = ScalarOperator(2.0)
        assert defect_form(B, np.array([1.0]), 2) == pytest.approx(9.0)

    def test_isometry_order1(self, rng):
        sp = make_space(3, capacity=16)
        R = LazyIsometry(sp)
        for _ in range(5):
            x = vec(sp, rng.standard_normal(3))
            assert abs(defect_form(R, x, 1)) <= 1e-10 * x.norm() ** 2

    def test_report_scale(self):
        B = ScalarOperator(2.0)
        rep = defect_report(B, [np.array([1.0])], 2)
        assert rep.max_abs_defect == pytest.approx(9.0)
        assert rep.scale == pytest.approx(16.0)  # max(1, 4)^2


class TestCompressedGram:
    def test_identity(self):
        sp = make_space(3)
        S = [sp.basis_vector(i) for i in range(3)]
        np.testing.assert_allclose(compressed_gram(ScalarOperator(1.0), S),
                                   np.eye(3), atol=1e-15)

    def test_hand_product(self):
        sp = make_space(2)
        T = DenseOperator([[2, 1], [0, 2]], sp, sp.labels["H1"])
        S = [sp.basis_vector(0), sp.basis_vector(1)]
        np.testing.assert_allclose(compressed_gram(T, S),
                                   [[4, 2], [2, 5]], atol=1e-14)


class TestDirectSumPower:
    def test_one_dim_doubled(self):
        out = direct_sum_power(DenseOperator([[2.0]]), 2)
        np.testing.assert_allclose(out.matrix, np.diag([2.0, 2.0]))

    def test_identity_power_four(self):
        out = direct_sum_power(DenseOperator(np.eye(3)), 4)
        np.testing.assert_allclose(out.matrix, np.eye(12))

    def test_norm_preserved(self, rng):
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        T = DenseOperator(M)
        assert direct_sum_power(T, 4).operator_norm == pytest.approx(
            T.operator_norm)


class TestNilpotents:
    def test_canonical_shift(self):
        A = np.array([[0, 1], [0, 0]], dtype=complex)
        B = three_isometry_from_nilpotent(DenseOperator(A))
        np.testing.assert_allclose(B.matrix, [[1, 1], [0, 1]])

    def test_square_exactly_zero(self):
        for seed in range(5):
            A = random_2nilpotent(8, seed)
            assert np.max(np.abs(A.matrix @ A.matrix)) == 0.0

    def test_rank_bound(self):
        A = random_2nilpotent(4, seed=3)
        assert np.linalg.matrix_rank(A.matrix) <= 2
        assert np.max(np.abs(A.matrix @ A.matrix)) == 0.0

    def test_odd_dimension(self):
        with pytest.raises(OddDimension):
            random_2nilpotent(3, seed=0)

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotent):
            three_isometry_from_nilpotent(DenseOperator(np.eye(2)))

    def test_zero_nilpotent_gives_identity(self):
        B = three_isometry_from_nilpotent(DenseOperator(np.zeros((2, 2))))
        x = np.array([1.0, 1.0])
        assert defect_form(B, x, 2) == pytest.approx(0.0)
        assert defect_form(B, x, 3) == pytest.approx(0.0)

    def test_hand_order3_defect(self):
        # B = [[1,1],[0,1]], x = (0,1): norms^2 are 1, 2, 5, 10
        B = three_isometry_from_nilpotent(
            DenseOperator(np.array([[0, 1], [0, 0]], dtype=complex)))
        x = np.array([0.0, 1.0])
        d3 = defect_form(B, x, 3)
        assert d3 == pytest.approx(-1 + 3 * 2 - 3 * 5 + 10, abs=1e-12)

    def test_random_nilpotents_are_3_isometries(self, rng):
        for seed, dim in ((0, 4), (1, 16), (2, 32)):
            B = three_isometry_from_nilpotent(random_2nilpotent(dim, seed))
            scale = max(1.0, B.operator_norm ** 2) ** 3
            for _ in range(50):
                x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
                x /= np.linalg.norm(x)
                assert abs(defect_form(B, x, 3)) <= 1e-9 * scale


class TestOperatorFile:
    def test_round_trip(self, tmp_path, rng):
        M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        path = tmp_path / "op.json"
        write_operator(path, M)
        np.testing.assert_array_equal(read_operator(path), M)

    def test_entry_count_checked(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"rows": 2, "cols": 2, "entries": [[1.0, 0.0]]}')
        with pytest.raises(ValueError):
            read_operator(path)


def test_apply_dispatch():
    assert apply(ScalarOperator(3.0), np.array([1.0]))[0] == 3.0
