import random

import pytest
from hypothesis import given, strategies as st

from pforms.errors import DegreeMismatch, HypothesisViolated, ZeroArgument
from pforms.field import Field
from pforms.forms import (DifferentialForm, GeneratorItem, GeneratorSet, SubspaceBasis, ann_bruteforce,
                          ann_closed_disjoint, ann_closed_mixed, ann_closed_power, d_of_element, d_operator,
                          expand_generator_set, form_from_json, log_form, power_wedges, set_wedge_nonzero,
                          subspace_equal, transversal_wedges, wedge, wedge_of_differentials)
from pforms.plinear import p_independent
from pforms.sampling import alternative_basis, random_element

from conftest import elements, fields

F2 = Field(2, ("x", "y"))
F2z = Field(2, ("x", "y", "z"))
F3 = Field(3, ("x", "y", "z"))


def dt(K, *names):
    return DifferentialForm.basis(K, tuple(K.index(n) for n in names))


def d(K, text):
    return d_of_element(K(text))


def span(K, n, forms):
    return SubspaceBasis.from_forms(K, n, forms)


class TestBasics:
    def test_d_of_variable(self):
        assert d(F2, "x").vector() == [F2.one(), F2.zero()]

    def test_leibniz_example(self):
        assert d(F2, "x^2*y") == dt(F2, "y") * F2("x^2")

    def test_constant(self):
        assert not d(F2, "1")

    def test_wedge_rules(self):
        dx, dy, dz = dt(F3, "x"), dt(F3, "y"), dt(F3, "z")
        assert not dx.wedge(dx)
        assert dy.wedge(dx) == -dx.wedge(dy)
        assert dt(F2, "y").wedge(dt(F2, "x")) == dt(F2, "x").wedge(dt(F2, "y"))
        assert (dy * F3["x"]).wedge(dz) == dt(F3, "y", "z") * F3["x"]

    def test_d_operator(self):
        assert d_operator(dt(F2, "y") * F2["x"]) == dt(F2, "x", "y")
        assert not d_operator(dt(F2, "y") * F2("x^2"))

    def test_log_forms(self):
        assert log_form(F2["x"]) == dt(F2, "x") / F2["x"]
        assert not log_form(F2["x"], F2["x"])
        assert log_form(F2("x*y")) == dt(F2, "x") / F2["x"] + dt(F2, "y") / F2["y"]
        with pytest.raises(ZeroArgument):
            log_form(F2.zero())

    def test_json_round_trip(self):
        w = dt(F3, "x", "z") * F3("x/y") + dt(F3, "y", "z")
        assert form_from_json(F3, w.to_json()) == w
        assert w.to_json()[0]["indices"] == [1, 3]


class TestSetWedge:
    def test_examples(self):
        x, y = F2["x"], F2["y"]
        assert set_wedge_nonzero([[x], [x]])[0] is False
        assert set_wedge_nonzero([[x], [y]]) == (True, (x, y))
        assert set_wedge_nonzero([[x, y], [x]]) == (True, (y, x))


class TestBruteforce:
    def test_examples(self):
        K = F2z
        dx, dy = dt(K, "x"), dt(K, "y")
        assert ann_bruteforce([dx], 1, K) == span(K, 1, [dx])
        assert ann_bruteforce([dx, dy], 2, K) == span(K, 2, [dx.wedge(dy)])
        assert ann_bruteforce([dx.wedge(dy)], 1, K) == span(K, 1, [dx, dy])

    def test_empty_set_gives_everything(self):
        assert ann_bruteforce([], 2, F2z).is_full()

    def test_mixed_degrees_rejected(self):
        with pytest.raises(DegreeMismatch):
            ann_bruteforce([dt(F2, "x"), dt(F2, "x", "y")], 0, F2)


class TestClosedForms:
    def test_disjoint(self):
        K = F2z
        x, y = K["x"], K["y"]
        g = ann_closed_disjoint([[x], [y]], 1)
        assert [(it.prefix, it.tail_degree) for it in g.items] == [((x,), 0), ((y,), 0)]
        assert expand_generator_set(g) == ann_bruteforce([d(K, "x").wedge(d(K, "y"))], 1, K)
        assert expand_generator_set(ann_closed_disjoint([[x]], 0)).dim == 0
        two = expand_generator_set(ann_closed_disjoint([[x], [y]], 2))
        assert two == ann_bruteforce(transversal_wedges([[x], [y]], K), 2, K)
        assert two == span(K, 2, [dt(K, "x", "y"), dt(K, "x", "z"), dt(K, "y", "z")])

    def test_disjoint_hypothesis(self):
        x = F2["x"]
        with pytest.raises(HypothesisViolated):
            ann_closed_disjoint([[x], [x * F2["y"] ** 2]], 1)

    def test_power(self):
        K = F2z
        x, y = K["x"], K["y"]
        assert expand_generator_set(ann_closed_power([x, y], 1, 2)) == span(K, 2, [dt(K, "x", "y")])
        assert expand_generator_set(ann_closed_power([x, y], 1, 2)) == ann_bruteforce(power_wedges([x, y], 1), 2, K)
        full = expand_generator_set(ann_closed_power([x, y], 3, 1))
        assert full.is_full() and full.dim == 3
        assert expand_generator_set(ann_closed_power([x, y], 2, 1)) == span(K, 1, [dt(K, "x"), dt(K, "y")])

    def test_power_nu_flag(self):
        g2 = ann_closed_power([F2z["x"]], 1, 1)
        g3 = ann_closed_power([F3["x"]], 1, 1)
        assert not g2.nu_items[0].conditional and g3.nu_items[0].conditional

    def test_mixed(self):
        K = F2z
        x, y = K["x"], K["y"]
        g = ann_closed_mixed([[x]], [y], 1)
        assert expand_generator_set(g) == span(K, 1, [dt(K, "x"), dt(K, "y")])
        g = ann_closed_mixed([[x]], [x * y], 1)
        assert expand_generator_set(g) == ann_bruteforce([d(K, "x").wedge(d(K, "x*y"))], 1, K)
        assert expand_generator_set(g) == span(K, 1, [dt(K, "x"), dt(K, "y") * x])
        with pytest.raises(HypothesisViolated):
            ann_closed_mixed([[x]], [x], 1)

    def test_expand_examples(self):
        x = F2["x"]
        assert expand_generator_set(GeneratorSet(F2, 1, [GeneratorItem((x,), 0)])) == span(F2, 1, [dt(F2, "x")])
        K = F2z
        g = GeneratorSet(K, 2, [GeneratorItem((K["x"],), 1)])
        assert expand_generator_set(g) == span(K, 2, [dt(K, "x", "y"), dt(K, "x", "z")])

    def test_subspace_equal(self):
        dx, dy = dt(F2, "x"), dt(F2, "y")
        assert subspace_equal(span(F2, 1, [dx, dy]), span(F2, 1, [dy, dx + dy]))
        assert not subspace_equal(span(F2, 1, [dx]), span(F2, 1, [dy]))
        with pytest.raises(DegreeMismatch):
            subspace_equal(span(F2, 1, [dx]), span(F2, 2, []))


@given(fields, st.data())
def test_d_is_a_derivation(K, data):
    a, b = data.draw(elements(K)), data.draw(elements(K))
    assert d_of_element(a * b) == d_of_element(b) * a + d_of_element(a) * b
    assert not d_of_element(a ** K.p)
    assert not d_operator(d_of_element(a))


@given(fields, st.data())
def test_d_operator_on_two_forms(K, data):
    a, b, c = (data.draw(elements(K)) for _ in range(3))
    w = d_of_element(a) * b
    assert not d_operator(d_operator(w))
    # d(c w) = dc ^ w + c dw
    assert d_operator(w * c) == d_of_element(c).wedge(w) + d_operator(w) * c


@given(fields, st.data())
def test_odd_forms_square_to_zero(K, data):
    a, b = data.draw(elements(K)), data.draw(elements(K))
    w = d_of_element(a) * b
    assert not w.wedge(w)
    v = d_of_element(b)
    assert w.wedge(v) == -v.wedge(w)


@given(fields, st.lists(st.randoms(use_true_random=False), min_size=1, max_size=3))
def test_independence_iff_wedge_nonzero(K, rngs):
    S = [random_element(K, r) for r in rngs]
    assert p_independent(S) == bool(wedge_of_differentials(S, K))


@given(fields, st.data())
def test_reading_over_more_variables_keeps_forms_nonzero(K, data):
    a, b = data.draw(elements(K)), data.draw(elements(K))
    w = d_of_element(a).wedge(d_of_element(b))
    E = K.extend(["u"])
    assert bool(w.embed(E)) == bool(w)


@given(fields, st.randoms(use_true_random=False))
def test_reduction_to_any_p_basis(K, rng):
    x, y = K["x"], K["y"]
    sets = [[x * y], [y + x ** K.p]]
    alt = [alternative_basis(S, rng) for S in sets]
    for n in range(K.m + 1):
        assert ann_bruteforce(transversal_wedges(sets, K), n, K) == ann_bruteforce(transversal_wedges(alt, K), n, K)


def test_wedge_is_associative():
    rng = random.Random(5)
    K = F3
    forms = [d_of_element(random_element(K, rng)) * random_element(K, rng) for _ in range(3)]
    assert wedge(*forms) == forms[0].wedge(forms[1].wedge(forms[2]))
