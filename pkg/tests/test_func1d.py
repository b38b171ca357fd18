import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanmax.errors import (
    DomainError,
    NonFiniteValueError,
    UnboundedSupError,
    UncertifiableTailError,
)
from meanmax.func1d import (
    Domain,
    Function1D,
    GridSpec,
    Tail,
    classify_monotonicity,
    envelope_function,
    evaluate,
    left_maximization,
    right_maximization,
)

from oracles import grid_sup, table_from_samples

TWO_PI = 2 * math.pi


def make(fun, a, b, tail=None, hint="none", locally_bounded=True):
    return Function1D(
        eval=fun,
        domain=Domain(a, b),
        tail=tail or Tail.unknown(),
        monotonicity=hint,
        locally_bounded=locally_bounded,
    )


@pytest.fixture
def f_sin():
    return make(np.sin, 0.0, TWO_PI)


@pytest.fixture
def f_exp():
    return make(lambda x: np.exp(-x), 0.0, math.inf, tail=Tail.vanishing())


class TestEvaluate:
    def test_direct(self):
        f = make(lambda x: np.exp(-x), 0.0, math.inf)
        assert evaluate(f, 1.0) == pytest.approx(0.3678794412, abs=1e-10)

    def test_domain_violation(self):
        f = make(lambda x: 1 / x, 1.0, math.inf)
        with pytest.raises(DomainError):
            evaluate(f, 0.5)

    def test_log(self):
        f = make(np.log, 1.0, math.inf)
        assert evaluate(f, math.e) == pytest.approx(1.0, abs=1e-14)

    def test_non_finite(self):
        f = make(lambda x: 1 / (x - 5.0), 0.0, 10.0)
        with pytest.raises(NonFiniteValueError):
            evaluate(f, 5.0)


class TestRightMaximization:
    def test_decreasing_vanishing(self, f_exp):
        assert right_maximization(f_exp, 2.0) == pytest.approx(math.exp(-2), abs=1e-9)

    def test_sin_past_peak(self, f_sin):
        want = grid_sup(np.sin, 2.0, TWO_PI, n=10**6)
        got = right_maximization(f_sin, 2.0)
        assert got == pytest.approx(want, abs=2e-9)
        assert got == pytest.approx(math.sin(2.0), abs=1e-9)

    def test_sin_with_peak(self, f_sin):
        assert right_maximization(f_sin, 1.0) == pytest.approx(1.0, abs=1e-9)

    def test_hint_shortcut_is_exact(self):
        f = make(lambda x: 1 / x, 1.0, math.inf, hint="decreasing")
        assert right_maximization(f, 3.0) == 1 / 3.0

    def test_uncertifiable_tail(self):
        f = make(np.sin, 0.0, math.inf)
        with pytest.raises(UncertifiableTailError):
            right_maximization(f, 1.0)

    def test_bounded_tail_uses_grid_max(self):
        f = make(lambda x: np.exp(-x), 0.0, math.inf, tail=Tail.bounded_by(5.0))
        with pytest.warns(RuntimeWarning, match="tail bound"):
            got = right_maximization(f, 0.0)
        assert got == pytest.approx(1.0, abs=1e-9)

    def test_result_at_least_f_r(self, f_sin):
        for r in (0.5, 2.5, 4.0):
            assert right_maximization(f_sin, r) >= math.sin(r) - 1e-12


class TestLeftMaximization:
    def test_increasing(self):
        f = make(lambda x: x, 0.0, 10.0)
        assert left_maximization(f, 3.0) == pytest.approx(3.0, abs=1e-9)

    def test_decreasing(self, f_exp):
        assert left_maximization(f_exp, 5.0) == pytest.approx(1.0, abs=1e-9)

    def test_sin(self, f_sin):
        want = grid_sup(np.sin, 0.0, 3.0, n=10**6)
        assert left_maximization(f_sin, 3.0) == pytest.approx(want, abs=2e-9)
        assert left_maximization(f_sin, 3.0) == pytest.approx(1.0, abs=1e-9)

    def test_closed_right_endpoint(self):
        # the interval [a, r] includes r, so an increasing function attains it
        f = make(lambda x: x**2, 0.0, 2.0)
        assert left_maximization(f, 1.5) == pytest.approx(2.25, abs=1e-9)

    def test_at_left_endpoint(self, f_exp):
        assert left_maximization(f_exp, 0.0) == 1.0

    def test_unbounded_flag(self):
        f = make(lambda x: 1 / (1 - x), 0.0, 1.0, locally_bounded=False)
        with pytest.raises(UnboundedSupError):
            left_maximization(f, 0.5)


class TestEnvelope:
    def test_right_of_decreasing_is_f(self, f_exp):
        env = envelope_function(f_exp, "right")
        fs = np.exp(-env.xs)
        assert np.allclose(env.table, fs, rtol=0, atol=1e-12)

    def test_left_of_sin(self, f_sin):
        env = envelope_function(f_sin, "left")
        for r in (0.3, 1.0, 1.5):
            assert env.value_at(r) == pytest.approx(math.sin(min(r, math.pi / 2)), abs=1e-8)
        for r in (2.0, 4.0, 6.0):
            assert env.value_at(r) == pytest.approx(1.0, abs=1e-8)

    def test_right_of_constant(self):
        f = make(lambda x: 7.0 + 0 * x, 0.0, 5.0)
        env = envelope_function(f, "right")
        assert np.all(env.table == 7.0)

    def test_tables_are_exactly_monotone(self, f_sin):
        right = envelope_function(f_sin, "right")
        left = envelope_function(f_sin, "left")
        assert np.all(np.diff(right.table) <= 0)
        assert np.all(np.diff(left.table) >= 0)

    def test_table_matches_brute_force(self, f_sin):
        env = envelope_function(f_sin, "right", GridSpec(node_count=257))
        want = table_from_samples(env.xs, env.sample_xs, env.sample_ys, "right")
        assert np.array_equal(env.table, want)

    def test_pointwise_domination(self, f_sin):
        env = envelope_function(f_sin, "right")
        assert np.all(env.table >= np.sin(env.xs))

    def test_sup_identity(self, f_sin):
        env = envelope_function(f_sin, "right")
        assert abs(float(env.table.max()) - float(env.sample_ys.max())) <= 2 * env.eps_sup

    def test_idempotence_exact(self, f_sin):
        grid = GridSpec(node_count=257)
        env1 = envelope_function(f_sin, "right", grid)
        env2 = envelope_function(env1.as_function(), "right", grid)
        assert np.array_equal(env1.xs, env2.xs)
        assert np.array_equal(env1.table, env2.table)

    def test_vectorized_queries_match_scalar(self, f_sin):
        env = envelope_function(f_sin, "right")
        qs = np.linspace(0.1, 6.0, 37)
        vec = env.value_at(qs)
        assert vec == pytest.approx([env.value_at(float(q)) for q in qs], abs=0)

    def test_oracle_equivalence(self, f_sin, f_exp):
        grid = GridSpec()
        for r in (0.5, 2.0, 4.5):
            want = grid_sup(np.sin, r, TWO_PI, n=10**6)
            assert abs(right_maximization(f_sin, r, grid) - want) <= 2e-9
        for r in (0.0, 1.0, 3.0):
            want = math.exp(-r)
            assert abs(right_maximization(f_exp, r, grid) - want) <= 2e-9


class TestClassify:
    def test_decreasing(self):
        assert classify_monotonicity(make(lambda x: -x, 0.0, 10.0)) == "decreasing"

    def test_increasing(self):
        assert classify_monotonicity(make(lambda x: x**2, 0.0, 1.0)) == "increasing"

    def test_neither(self):
        assert classify_monotonicity(make(np.sin, 0.0, TWO_PI)) == "neither"

    def test_constant_counts_as_decreasing(self):
        assert classify_monotonicity(make(lambda x: 3.0 + 0 * x, 0.0, 5.0)) == "decreasing"


@st.composite
def damped_oscillations(draw):
    terms = draw(st.integers(min_value=1, max_value=3))
    coeffs = []
    for _ in range(terms):
        c = draw(st.floats(min_value=-2.0, max_value=2.0))
        decay = draw(st.floats(min_value=0.1, max_value=1.5))
        freq = draw(st.floats(min_value=0.5, max_value=6.0))
        phase = draw(st.floats(min_value=0.0, max_value=6.0))
        coeffs.append((c, decay, freq, phase))
    return coeffs


def _damped(coeffs):
    def fun(x):
        total = 0.0 * x
        for c, d, w, p in coeffs:
            total = total + c * np.exp(-d * x) * np.sin(w * x + p)
        return total

    return fun


@given(damped_oscillations(), st.sampled_from(["right", "left"]))
@settings(max_examples=25, deadline=None)
def test_envelope_invariants_random(coeffs, side):
    f = make(_damped(coeffs), 0.0, 10.0)
    env = envelope_function(f, side, GridSpec(node_count=129, refinement_rounds=1))
    diffs = np.diff(env.table)
    if side == "right":
        assert np.all(diffs <= 0)
    else:
        assert np.all(diffs >= 0)
    assert np.all(env.table >= _damped(coeffs)(env.xs) - 1e-15)
    assert float(env.table.max()) == float(env.sample_ys.max())


class TestGridSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(node_count=2)
        with pytest.raises(ValueError):
            GridSpec(eps_sup=0.0)
        with pytest.raises(ValueError):
            GridSpec(spacing="random")

    def test_effective_eps_scales(self):
        g = GridSpec()
        assert g.effective_eps(0.5) == pytest.approx(1e-9)
        assert g.effective_eps(100.0) == pytest.approx(1e-7)


class TestDomain:
    def test_validation(self):
        with pytest.raises(ValueError):
            Domain(2.0, 1.0)
        with pytest.raises(ValueError):
            Domain(math.inf, math.inf)

    def test_contains_half_open(self):
        d = Domain(0.0, 1.0)
        assert d.contains(0.0) and d.contains(0.999) and not d.contains(1.0)
