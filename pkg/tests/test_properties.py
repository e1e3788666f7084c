"""Property-based checks of the algebraic invariants."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from cayleybench import FiniteFunction, GroupModel, convolve, restrict_sphere

MODELS = {
    "free(2)": GroupModel("free(2)"),
    "free-abelian(2)": GroupModel("free-abelian(2)"),
    "zz": GroupModel("free-product(free-abelian(1),free-abelian(1))"),
    "cyclic(6)": GroupModel("cyclic(6)"),
    "mixed": GroupModel("direct-product(free(1),cyclic(3))"),
}

model_key = st.sampled_from(sorted(MODELS))


def word_strategy(model, max_size=8):
    return st.lists(st.integers(0, model.n_letters - 1), max_size=max_size)


@st.composite
def model_and_words(draw, n_words=1):
    model = MODELS[draw(model_key)]
    words = tuple(draw(word_strategy(model)) for _ in range(n_words))
    return (model,) + words


@given(model_and_words())
@settings(max_examples=120, deadline=None)
def test_normalize_idempotent(data):
    model, word = data
    e = model.normalize(word)
    assert model.normalize(list(e.word)) == e


@given(model_and_words(2))
@settings(max_examples=120, deadline=None)
def test_normal_form_respects_group_law(data):
    model, w1, w2 = data
    a, b = model.normalize(w1), model.normalize(w2)
    assert model.normalize(list(w1) + list(w2)) == model.multiply(a, b)


@given(model_and_words(2))
@settings(max_examples=120, deadline=None)
def test_length_subadditive(data):
    model, w1, w2 = data
    a, b = model.normalize(w1), model.normalize(w2)
    assert model.multiply(a, b).length <= a.length + b.length


@given(model_and_words())
@settings(max_examples=120, deadline=None)
def test_length_inverse_symmetric(data):
    model, word = data
    a = model.normalize(word)
    assert model.inverse(a).length == a.length
    assert model.multiply(a, model.inverse(a)).is_identity()


@given(model_and_words())
@settings(max_examples=80, deadline=None)
def test_canonical_word_is_geodesic_and_prefix_closed(data):
    model, word = data
    e = model.normalize(word)
    assert len(e.word) == e.length
    # prefixes of the canonical word are canonical themselves
    for i in range(len(e.word)):
        prefix = model.normalize(list(e.word[:i]))
        assert prefix.word == e.word[:i]


def _finite_functions(model, draw, values, size):
    picks = draw(st.lists(st.tuples(st.integers(0, len(values) - 1),
                                    st.integers(-3, 3)), max_size=size))
    out = {}
    for i, c in picks:
        if c:
            out[values[i]] = out.get(values[i], 0) + Fraction(c, 2)
    return FiniteFunction(model, {e: v for e, v in out.items() if v}, "real")


@st.composite
def convolution_instances(draw):
    model = MODELS[draw(st.sampled_from(["free(2)", "free-abelian(2)", "cyclic(6)"]))]
    values = [model.normalize(draw(word_strategy(model, 4))) for _ in range(4)]
    x = _finite_functions(model, draw, values, 4)
    y = _finite_functions(model, draw, values, 4)
    return model, x, y


@given(convolution_instances())
@settings(max_examples=60, deadline=None)
def test_sphere_decomposition_orthogonal(data):
    model, x, y = data
    conv = convolve(x, y)
    total = conv.norm_sq()
    max_p = conv.max_length()
    assert total == sum(restrict_sphere(conv, p).norm_sq() for p in range(max_p + 1))


@given(convolution_instances())
@settings(max_examples=60, deadline=None)
def test_young_inequality(data):
    model, x, y = data
    assert convolve(x, y).norm() <= float(x.l1()) * y.norm() + 1e-9
