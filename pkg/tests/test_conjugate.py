import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dctk.conjugate import (
    FlatBottom,
    LinearPlus,
    Quadratic,
    Restricted,
    SeparableConvex,
    Shifted,
    SumOf,
    Table,
    VShape,
    conjugate_closed,
    conjugate_eval,
    conjugate_eval_with_argmax,
    eval_at,
    from_json,
    is_fitting,
    materialize_table,
    right_derivative,
    separable_conjugate,
    square_sum,
    subdifferential_interval,
    to_json,
)
from dctk.errors import DomainError, IndeterminateDifference, UnsupportedForm
from dctk.extint import MINUS_INF, PLUS_INF, is_finite

from helpers import brute_conjugate, dom_range, random_convex_table, univariate_corpus


class TestEval:
    def test_quadratic(self):
        assert eval_at(Quadratic(1), 3) == 9

    def test_vshape(self):
        assert eval_at(VShape(3, -1, 1), 5) == 2

    def test_restricted_outside(self):
        assert eval_at(Restricted(0, 2, Quadratic(1)), -1) is PLUS_INF

    def test_table_convexity_rejected(self):
        with pytest.raises(ValueError):
            Table(0, (0, 5, 0))

    def test_table_values_must_be_ints(self):
        with pytest.raises(ValueError):
            Table(0, (0, PLUS_INF))


class TestRightDerivative:
    def test_quadratic_unit(self):
        assert right_derivative(Quadratic(1), 1) == 3

    def test_quadratic_weighted(self):
        assert right_derivative(Quadratic(2), 1) == 6  # 8 - 2

    def test_flat_bottom_zero(self):
        assert right_derivative(FlatBottom(1, 2, -1, 1), 1) == 0

    def test_outside_domain(self):
        t = Table(0, (1, 2))
        assert right_derivative(t, 1) is PLUS_INF
        assert right_derivative(t, -1) is MINUS_INF
        with pytest.raises(IndeterminateDifference):
            right_derivative(t, 5)

    def test_monotone_on_corpus(self):
        for phi in univariate_corpus(60):
            lo, hi = dom_range(phi)
            prev = MINUS_INF
            for k in range(lo, hi):
                cur = right_derivative(phi, k)
                assert prev <= cur
                prev = cur


class TestConjugateEval:
    def test_quadratic(self):
        assert conjugate_eval(Quadratic(1), 3) == 2

    def test_quadratic_weighted(self):
        assert conjugate_eval(Quadratic(2), 5) == 3

    def test_vshape_unbounded(self):
        assert conjugate_eval(VShape(3, -1, 1), 2) is PLUS_INF

    def test_vshape_zero(self):
        assert conjugate_eval(VShape(3, -1, 1), 0) == 0

    def test_argmax_is_attaining(self):
        for phi in univariate_corpus(40):
            for ell in range(-5, 6):
                val, k = conjugate_eval_with_argmax(phi, ell)
                if is_finite(val):
                    assert k is not None
                    assert k * ell - phi.value(k) == val

    def test_unbounded_tails(self):
        # Slope saturates at c on the infinite side.
        phi = VShape(0, -2, 2)
        assert conjugate_eval(phi, 2) == 0
        assert conjugate_eval(phi, 3) is PLUS_INF
        assert conjugate_eval(phi, -3) is PLUS_INF


class TestConjugateClosed:
    def test_square(self):
        assert conjugate_closed(Quadratic(1), 3) == 2

    def test_shifted(self):
        assert conjugate_closed(Shifted(1, Quadratic(1)), 2) == 3

    def test_linear_plus(self):
        assert conjugate_closed(LinearPlus(1, Quadratic(1)), 3) == 1

    def test_restricted(self):
        assert conjugate_closed(Restricted(0, 2, Quadratic(1)), 3) == 2

    def test_table_unsupported(self):
        with pytest.raises(UnsupportedForm):
            conjugate_closed(Table(0, (0, 1)), 1)

    def test_matches_eval_on_corpus(self):
        for phi in univariate_corpus(80):
            if isinstance(phi, Table):
                continue
            for ell in range(-8, 9):
                assert conjugate_closed(phi, ell) == conjugate_eval(phi, ell)


class TestFitting:
    def test_examples(self):
        ok, w = is_fitting(Quadratic(1), 1, 2)
        assert ok and (w.lower, w.upper) == (1, 3)
        assert is_fitting(Quadratic(1), 0, 0)[0]
        assert not is_fitting(Quadratic(1), 1, 4)[0]

    def test_domain_error(self):
        with pytest.raises(DomainError):
            is_fitting(Table(0, (0, 1)), 5, 0)

    def test_subdifferential(self):
        assert subdifferential_interval(Quadratic(1), 1) == (1, 3)
        assert subdifferential_interval(VShape(3, -1, 1), 3) == (-1, 1)
        lo, hi = subdifferential_interval(Table(0, (0, 0, 0)), 0)
        assert lo is MINUS_INF and hi == 0


class TestSeparable:
    def test_square_sum_conjugate(self):
        Phi = square_sum(["a", "b"])
        assert separable_conjugate(Phi, (3, 3)) == 4
        assert separable_conjugate(Phi, (0, 0)) == 0

    def test_abs_conjugate_infinite(self):
        Phi = SeparableConvex(
            (("a", VShape(3, -1, 1)), ("b", VShape(1, -1, 1)))
        )
        assert separable_conjugate(Phi, (0, 2)) is PLUS_INF

    def test_prime(self):
        Phi = square_sum(["a", "b"])
        assert Phi.prime((1, 1)) == [3, 3]
        assert Phi.prime_minus((1, 1)) == [1, 1]


class TestJsonRoundTrip:
    def test_corpus_round_trip(self):
        for phi in univariate_corpus(60):
            assert from_json(to_json(phi)) == phi

    def test_null_bounds(self):
        phi = from_json(
            {"form": "vshape", "k0": 3, "c_minus": -1, "c_plus": 1,
             "A": None, "B": None}
        )
        assert phi == VShape(3, -1, 1)


class TestBiconjugation:
    def test_tables(self):
        import random

        rng = random.Random(3)
        for _ in range(40):
            t = random_convex_table(rng)
            lo, hi = dom_range(t)
            if lo == hi:
                slo, shi = -1, 1
            else:
                slo = right_derivative(t, lo) - 1
                shi = right_derivative(t, hi - 1) + 1
            conj = materialize_table(
                Table(slo, tuple(conjugate_eval(t, l) for l in range(slo, shi + 1))),
                slo,
                shi,
            )
            for k in range(lo, hi + 1):
                assert conjugate_eval(conj, k) == t.value(k)

    def test_conjugate_is_convex(self):
        for phi in univariate_corpus(40):
            vals = [conjugate_eval(phi, l) for l in range(-10, 11)]
            if all(is_finite(v) for v in vals):
                Table(-10, tuple(vals))  # constructor checks convexity


@settings(max_examples=150, deadline=None)
@given(
    st.integers(-8, 4),
    st.lists(st.integers(-4, 4), min_size=0, max_size=10),
    st.integers(-15, 15),
    st.integers(-12, 12),
)
def test_table_conjugate_matches_bruteforce(k0, slopes, v0, ell):
    slopes = sorted(slopes)
    values = [v0]
    for s in slopes:
        values.append(values[-1] + s)
    t = Table(k0, tuple(values))
    assert conjugate_eval(t, ell) == brute_conjugate(t, ell)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(-6, 6),
    st.integers(-4, 4),
    st.integers(0, 4),
    st.integers(-12, 12),
)
def test_vshape_bounded_conjugate_matches_bruteforce(k0, c1, dc, ell):
    phi = VShape(k0, c1, c1 + dc, k0 - 3, k0 + 3)
    assert conjugate_eval(phi, ell) == brute_conjugate(phi, ell)
    assert conjugate_closed(phi, ell) == brute_conjugate(phi, ell)
