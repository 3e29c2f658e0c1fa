import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import null_space

from src.analysis.fixpoint import (
    FixedPointKind,
    FixedPointSet,
    extreme_rays,
    fixed_points,
    fixed_points_class1,
    fixed_points_class2,
    fixed_points_n3_oracle,
    invariant_face,
    is_fixed_point,
    reduce_system,
    sample_fixed_point,
)
from src.analysis.linalg import cramer_ray, eliminate, rank
from src.core.builders import CYCLE_TABLE_REGIMES, cycle_table_operator, with_zero_rows
from src.core.extended import NEG_INF
from src.core.matrix import Matrix, max_abs
from src.core.measure import make_measure
from src.core.sampling import make_rng, random_class1, random_class2, random_measure
from src.errors import (
    AnchorViolationError,
    LengthMismatchError,
    NotApplicableError,
    NotClassIError,
    NotClassIIError,
    PositiveCoordinateError,
    ValidationError,
)
from src.utils.config import Tolerances
from tests.mocks import operators


def ray_example():
    return with_zero_rows([[0.5, 0.25], [1.0, 0.5]], 3, [1, 2])


def in_oracle_domain(B, tol=1e-9):
    """The 2×2 minors for which the n = 3 closed form is exact."""
    shifted = np.asarray(B) - np.eye(2)
    scale = max(1.0, float(np.max(np.abs(shifted))))
    singular = abs(np.linalg.det(shifted)) <= tol * scale ** 2
    return not singular or B[0][0] < 1.0 - tol or np.allclose(B, np.eye(2), atol=tol)


class TestLinalg:
    def test_rank(self):
        assert rank(np.array([[1.0, 2.0], [2.0, 4.0]])) == 1
        assert rank(np.zeros((3, 3))) == 0
        assert rank(np.eye(3)) == 3

    def test_cramer_ray(self):
        M = np.array([[-0.5, 0.25], [1.0, -0.5]])
        ray = cramer_ray(M, eliminate(M))
        direction = ray.direction(2)
        np.testing.assert_allclose(M @ direction, 0.0, atol=1e-12)
        assert direction[ray.free_col] == 1.0

    def test_cramer_ray_needs_corank_one(self):
        with pytest.raises(ValueError):
            cramer_ray(np.eye(2), eliminate(np.eye(2)))

    def test_absolute_threshold(self):
        M = np.array([[1.0, 0.0], [0.0, 1e-6]])
        assert eliminate(M).rank == 2
        assert eliminate(M, absolute_tol=1e-3).rank == 1


class TestClass1:
    def test_ray(self):
        S = fixed_points_class1(ray_example())
        assert S.kind is FixedPointKind.CONE
        assert S.regime == "corank_one"
        assert S.generators[0] == pytest.approx((0.5, 1.0, 0.0))
        assert S.forced_zero_coords == frozenset({3})
        assert not S.requires_zero_anchor

    def test_plane(self):
        S = fixed_points_class1(Matrix.from_rows(operators.PLANE_3))
        assert S.kind is FixedPointKind.CONE
        assert sorted(S.generators) == [(0.0, 1.0, 0.0), (1.0, 0.0, 0.0)]

    def test_nonsingular(self):
        S = fixed_points_class1(with_zero_rows([[0.5, 0.1], [0.1, 0.5]], 3, [1, 2]))
        assert S.kind is FixedPointKind.UNIQUE_ZERO
        assert S.regime == "nonsingular"

    def test_positive_coefficient_excludes_ray(self):
        S = fixed_points_class1(Matrix.from_rows(operators.SINGULAR_NO_RAY_3))
        assert S.kind is FixedPointKind.UNIQUE_ZERO
        assert S.regime == "corank_one"

    def test_all_zero_rows(self):
        S = fixed_points_class1(Matrix.from_rows(operators.ALL_ZERO_2))
        assert S.regime == "no_free_rows"
        assert S.forced_zero_coords == frozenset({1, 2})

    def test_rejects_class2(self, cycle_table):
        with pytest.raises(NotClassIError):
            fixed_points_class1(cycle_table)

    def test_reduced_system(self):
        system = reduce_system(ray_example())
        assert system.kept_indices == (1, 2)
        assert system.rank == 1
        record = system.cofactor_record()
        assert record["free_index"] in (1, 2)
        assert invariant_face(ray_example()) == frozenset({3})

    def test_sign_condition_both_sides(self):
        rng = make_rng(17)
        for _ in range(20):
            a11 = float(rng.uniform(0.05, 0.95))
            a12 = float(rng.uniform(0.1, 2.0))
            u = float(rng.uniform(0.1, 0.9))
            a21 = u * (1.0 - a11) / a12
            A = with_zero_rows([[a11, a12], [a21, 1.0 - u]], 3, [1, 2])
            S = fixed_points_class1(A)
            assert S.kind is FixedPointKind.CONE
            x = sample_fixed_point(S, [float(rng.uniform(0.5, 3.0))])
            assert is_fixed_point(A, x, 1e-9)
        for _ in range(20):
            a11 = float(rng.uniform(1.1, 3.0))
            a12 = float(rng.uniform(0.1, 2.0))
            A = with_zero_rows([[a11, a12], [0.0, 1.0]], 3, [1, 2])
            S = fixed_points_class1(A)
            assert S.kind is FixedPointKind.UNIQUE_ZERO

    def test_extreme_rays_of_zero_system(self):
        rays = extreme_rays(np.zeros((2, 2)), 0.0)
        assert [list(r) for r in rays] == [[1.0, 0.0], [0.0, 1.0]]

    def test_extreme_rays_of_mixed_system(self):
        # x1 = x2 with x3 free
        M = np.array([[1.0, -1.0, 0.0], [0.0, 0.0, 0.0], [-1.0, 1.0, 0.0]])
        rays = extreme_rays(M, 1e-9)
        assert sorted(tuple(r) for r in rays) == [(0.0, 0.0, 1.0), (1.0, 1.0, 0.0)]


class TestClass2:
    def test_unique_zero_when_no_unit_cycle(self):
        S = fixed_points_class2(operators.cycle_table(4.0, 0.25, 0.5))
        assert S.kind is FixedPointKind.UNIQUE_ZERO
        assert S.forced_zero_coords == frozenset({1, 2, 3, 4, 5})

    def test_single_unit_cycle(self):
        S = fixed_points_class2(operators.cycle_table(1.0, 4.0, 0.5))
        assert S.generators == ((1.0, 0.5, 0.0, 0.0, 0.0),)
        assert not S.requires_zero_anchor
        assert S.forced_zero_coords == frozenset({3, 4, 5})

    def test_all_unit_cycles_need_anchor(self, cycle_table):
        S = fixed_points_class2(cycle_table)
        assert len(S.generators) == 3
        assert S.requires_zero_anchor
        assert S.generator_supports() == [frozenset({1, 2}), frozenset({3, 5}), frozenset({4})]

    def test_identity(self):
        S = fixed_points_class2(Matrix.identity(3))
        assert len(S.generators) == 3
        assert S.requires_zero_anchor

    def test_cycle_table_regimes(self):
        rng = make_rng(8)
        for regime in CYCLE_TABLE_REGIMES:
            for _ in range(3):
                A = cycle_table_operator(*regime, scale=float(rng.uniform(1.5, 4.0)))
                S = fixed_points_class2(A)
                units = sum(regime)
                assert len(S.generators) == units
                assert S.requires_zero_anchor == (units == 3)
                expected_kind = FixedPointKind.CONE if units else FixedPointKind.UNIQUE_ZERO
                assert S.kind is expected_kind
                for _ in range(10):
                    alphas = list(rng.uniform(0.0, 3.0, size=units))
                    if S.requires_zero_anchor:
                        alphas[int(rng.integers(units))] = 0.0
                    x = sample_fixed_point(S, alphas)
                    assert is_fixed_point(A, x, 1e-9)
                    assert S.contains(x)

    def test_rejects_class1(self, contracting_row):
        with pytest.raises(NotClassIIError):
            fixed_points_class2(contracting_row)


def class1_with_fixed_point(rng, n):
    """Class I matrix built around a strictly negative fixed point off its zero row."""
    zero = int(rng.integers(1, n + 1))
    v = rng.uniform(-3.0, -0.2, size=n)
    v[zero - 1] = 0.0
    entries = np.zeros((n, n))
    for i in range(n):
        if i == zero - 1:
            continue
        row = rng.uniform(0.0, 1.0, size=n) * (rng.random(n) < 0.6)
        row[i] = 0.0
        share = float(row @ v) / v[i]
        if share > 0.9:
            row *= 0.9 / share
            share = 0.9
        row[i] = 1.0 - share
        entries[i] = row
    return Matrix(entries)


def fixed_candidates(A, rng, count):
    """Points of I_n pulled from the null space of A − I with one coordinate pinned to 0."""
    n = A.n
    shifted = A.entries - np.eye(n)
    for _ in range(count):
        if rng.random() < 0.2:
            yield random_measure(rng, n)
            continue
        j = int(rng.integers(n))
        basis = null_space(np.vstack([shifted, np.eye(n)[j]]))
        if basis.shape[1] == 0:
            continue
        x = basis @ rng.normal(size=basis.shape[1])
        if np.max(x) > 1e-12:
            x = -x
        if np.max(x) > 1e-12:
            continue
        x = x / max(1.0, float(np.max(np.abs(x))))
        x[j] = 0.0
        yield make_measure(np.minimum(x, 0.0))


class TestExhaustive:
    def check_exhaustive(self, A, S, rng, count=60):
        fixed = 0
        for x in fixed_candidates(A, rng, count):
            if is_fixed_point(A, x, 1e-9):
                fixed += 1
                assert S.contains(x, 1e-7), (A.entries.tolist(), x.coords, S.generators)
        return fixed

    @pytest.mark.parametrize("n", [3, 4])
    def test_class1_has_no_missing_fixed_points(self, n):
        rng = make_rng(60 + n)
        fixed = 0
        for k in range(120):
            A = class1_with_fixed_point(rng, n) if k % 3 else random_class1(rng, n)
            fixed += self.check_exhaustive(A, fixed_points_class1(A), rng)
        assert fixed > 0

    @pytest.mark.parametrize("minor", [
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
        [[1.0, 0.0, 0.0], [0.0, 0.5, 0.5], [0.0, 0.5, 0.5]],
    ])
    def test_class1_unit_blocks(self, minor):
        A = with_zero_rows(minor, 4, [1, 2, 3])
        assert self.check_exhaustive(A, fixed_points_class1(A), make_rng(66)) > 0

    @pytest.mark.parametrize("n", [3, 4])
    def test_class2_has_no_missing_fixed_points(self, n):
        rng = make_rng(70 + n)
        fixed = 0
        for _ in range(120):
            A = random_class2(rng, n, unit_cycle_probability=0.5)
            fixed += self.check_exhaustive(A, fixed_points_class2(A), rng)
        assert fixed > 0

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 7))
    def test_class1_samples_are_members(self, seed, n):
        rng = make_rng(seed)
        A = class1_with_fixed_point(rng, n) if seed % 2 else random_class1(rng, n)
        S = fixed_points_class1(A)
        alphas = list(rng.uniform(0.0, 3.0, size=len(S.generators)))
        if S.requires_zero_anchor and alphas:
            alphas[int(rng.integers(len(alphas)))] = 0.0
        x = sample_fixed_point(S, alphas)
        assert S.contains(x, 1e-7)
        assert is_fixed_point(A, x, 1e-8 * max(1.0, max_abs(x)))


class TestMembership:
    def test_identity_fixes_everything(self):
        assert is_fixed_point(Matrix.identity(3), (0.0, -2.0, NEG_INF), 1e-9)

    def test_origin_of_contracting_row(self, contracting_row):
        assert is_fixed_point(contracting_row, (0.0, 0.0), 1e-9)
        assert not is_fixed_point(contracting_row, (-1.0, 0.0), 1e-9)

    def test_unit_two_cycle_point(self):
        A = operators.cycle_table(1.0, 4.0, 0.5)
        # β = 0.5
        assert is_fixed_point(A, (-2.0, -1.0, 0.0, 0.0, 0.0), 1e-9)

    def test_positive_tolerance_required(self, contracting_row):
        with pytest.raises(ValidationError):
            is_fixed_point(contracting_row, (0.0, 0.0), 0.0)

    def test_contains_respects_anchor(self, cycle_table):
        S = fixed_points_class2(cycle_table)
        assert not S.contains((-1.0, -0.5, -1.0, -1.0, -0.5))
        assert S.contains((-1.0, -0.5, 0.0, -1.0, 0.0))

    def test_contains_rejects_neg_inf(self, cycle_table):
        assert not fixed_points_class2(cycle_table).contains((NEG_INF, NEG_INF, 0.0, 0.0, 0.0))


class TestSampling:
    def test_unique_zero(self):
        S = fixed_points_class2(operators.cycle_table(4.0, 0.25, 0.5))
        assert sample_fixed_point(S, []).coords == (0.0,) * 5

    def test_ray_sample(self):
        S = fixed_points_class1(ray_example())
        assert sample_fixed_point(S, [2.0]).coords == pytest.approx((-1.0, -2.0, 0.0))

    def test_anchor_violation(self, cycle_table):
        S = fixed_points_class2(cycle_table)
        with pytest.raises(AnchorViolationError):
            sample_fixed_point(S, [1.0, 1.0, 1.0])

    def test_length_mismatch(self, cycle_table):
        with pytest.raises(LengthMismatchError):
            sample_fixed_point(fixed_points_class2(cycle_table), [1.0])

    def test_negative_weight(self):
        with pytest.raises(ValidationError):
            sample_fixed_point(fixed_points_class1(ray_example()), [-1.0])

    def test_measure_tolerance(self):
        S = FixedPointSet(3, FixedPointKind.CONE, ((-1e-10, 1.0, 2.0),), False, frozenset(), "cone")
        with pytest.raises(PositiveCoordinateError):
            sample_fixed_point(S, [1.0])
        assert sample_fixed_point(S, [1.0], tol=1e-9).coords == pytest.approx((1e-10, -1.0, -2.0))


class TestN3Oracle:
    def test_ray_branch(self):
        S = fixed_points_n3_oracle(ray_example())
        assert S.regime == "n3_ray"
        assert S.generators[0] == pytest.approx((0.5, 1.0, 0.0))
        assert S.equivalent(fixed_points_class1(ray_example()))

    def test_plane_branch(self):
        A = Matrix.from_rows(operators.PLANE_3)
        S = fixed_points_n3_oracle(A)
        assert S.regime == "n3_plane"
        assert S.equivalent(fixed_points_class1(A))

    def test_origin_branch(self):
        A = with_zero_rows([[0.5, 0.1], [0.1, 0.5]], 3, [1, 2])
        assert fixed_points_n3_oracle(A).kind is FixedPointKind.UNIQUE_ZERO

    def test_positive_coefficient_agrees(self):
        A = Matrix.from_rows(operators.SINGULAR_NO_RAY_3)
        assert fixed_points_n3_oracle(A).equivalent(fixed_points_class1(A))

    def test_not_applicable(self):
        with pytest.raises(NotApplicableError):
            fixed_points_n3_oracle(Matrix.from_rows(operators.ALL_ZERO_2))
        with pytest.raises(NotApplicableError):
            fixed_points_n3_oracle(with_zero_rows([[0.5]], 3, [1]))

    def test_outside_domain_falls_back_to_origin(self):
        A = with_zero_rows([[1.5, 0.0], [0.3, 1.0]], 3, [1, 2])
        assert not in_oracle_domain(A.minor((1, 2)))
        assert fixed_points_n3_oracle(A).kind is FixedPointKind.UNIQUE_ZERO
        S = fixed_points_class1(A)
        assert S.kind is FixedPointKind.CONE
        assert len(S.generators) == 1
        assert S.generators[0] == pytest.approx((0.0, 1.0, 0.0))

    def test_agrees_on_random_instances(self):
        rng = make_rng(4)
        for _ in range(300):
            zero = int(rng.integers(1, 4))
            kept = [i for i in (1, 2, 3) if i != zero]
            if rng.random() < 0.5:
                minor = rng.uniform(0.0, 2.0, size=(2, 2))
            else:
                a11 = float(rng.uniform(0.05, 0.95))
                a12 = float(rng.uniform(0.1, 2.0))
                u = float(rng.uniform(0.1, 0.9))
                minor = [[a11, a12], [u * (1.0 - a11) / a12, 1.0 - u]]
            if not in_oracle_domain(minor):
                continue
            A = with_zero_rows(minor, 3, kept)
            assert fixed_points_n3_oracle(A).equivalent(fixed_points_class1(A))


class TestDispatch:
    def test_dispatch_by_class(self, cycle_table, contracting_row):
        assert fixed_points(cycle_table).requires_zero_anchor
        assert fixed_points(contracting_row).kind is FixedPointKind.UNIQUE_ZERO

    def test_tolerances_forwarded(self):
        A = operators.cycle_table(1.0 + 1e-6, 4.0, 0.5)
        assert fixed_points(A).kind is FixedPointKind.UNIQUE_ZERO
        assert fixed_points(A, Tolerances(unit=1e-3)).kind is FixedPointKind.CONE

    def test_neither(self):
        with pytest.raises(NotApplicableError):
            fixed_points(Matrix.from_rows(operators.ONES_2))

    def test_record(self):
        record = fixed_points_class1(ray_example()).to_record()
        assert record["kind"] == "cone"
        assert record["forced_zero_coords"] == [3]
