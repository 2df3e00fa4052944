import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracle import ORing

from sandwich.errors import InvalidLambda, InvalidRing
from sandwich.ring import (FormParam, RingSpec, form_param_membership, lambda_max, lambda_min,
                           lambda_power, make_ring)

SPECS = [
    dict(m=5),
    dict(m=4, lam=(3,)),
    dict(m=6),
    dict(m=5, f=(1, 0, 1), involution="neg"),
    dict(m=3, f=(1, 0, 1), involution="neg"),
    dict(m=4, f=(1, 1, 1), involution="c_minus", c=3),
]


def oracle(spec: dict) -> ORing:
    return ORing(spec["m"], spec.get("f"), spec.get("involution", "trivial"),
                 spec.get("lam", (1,)), spec.get("c", 0))


@pytest.mark.parametrize("spec", SPECS)
def test_arithmetic_matches_reference(spec):
    r, o = make_ring(**spec), oracle(spec)
    els = list(r.elements())
    assert len(els) == r.size == o.m ** o.d
    for a in els[::3]:
        for b in els[::2]:
            assert (a * b).to_json() == list(o.mul(tuple(a.c), tuple(b.c)))
            assert (a + b).to_json() == list(o.add(tuple(a.c), tuple(b.c)))
        assert a.bar.to_json() == list(o.conj(tuple(a.c)))


@pytest.mark.parametrize("spec", SPECS)
def test_units_by_enumeration(spec):
    r, o = make_ring(**spec), oracle(spec)
    for a in r.elements():
        expected = o.inverse(tuple(a.c))
        assert a.is_unit() == (expected is not None)
        if expected is not None:
            assert a.inverse().to_json() == list(expected)


def test_gaussian_norms():
    r = make_ring(m=5, f=(1, 0, 1), involution="neg")
    for a in range(5):
        for b in range(5):
            x = r([a, b])
            assert x * x.bar == r((a * a + b * b) % 5)


def test_lambda_validation():
    r = make_ring(m=4, lam=(3,))
    assert r.lam == r(3) and r.lam_bar == r(3)
    with pytest.raises(InvalidLambda):
        make_ring(m=5, lam=(2,))
    with pytest.raises(InvalidRing):
        make_ring(m=1)
    with pytest.raises(InvalidRing):
        make_ring(m=5, f=(1, 0, 2))


def test_lambda_power_examples():
    r = make_ring(m=5, f=(1, 0, 1), involution="neg", lam=(0, 1))
    assert lambda_power(r, 2, 3) == r.one
    assert lambda_power(r, -2, 3) == r.lam
    assert lambda_power(r, 2, -3) == r.lam_bar
    assert r.lam * r.lam_bar == r.one


def test_form_parameter_examples():
    z4 = make_ring(m=4)
    assert not form_param_membership(FormParam(z4, "min"), z4(2))
    assert form_param_membership(FormParam(z4, "max"), z4(2))
    assert lambda_max(z4) == frozenset({z4(0), z4(2)})
    z4s = make_ring(m=4, lam=(3,))
    assert form_param_membership(FormParam(z4s, "min"), z4s(2))
    assert lambda_min(z4s) == frozenset({z4s(0), z4s(2)})


@pytest.mark.parametrize("spec", SPECS)
def test_form_parameter_bounds(spec):
    r = make_ring(**spec)
    lo, hi = lambda_min(r), lambda_max(r)
    assert lo <= hi
    for kind in ("min", "max"):
        assert FormParam(r, kind).check_axioms()


def test_special_cases():
    o = make_ring(m=6)
    assert lambda_min(o) == frozenset({o.zero})
    s = make_ring(m=6, lam=(5,))
    assert lambda_max(s) == frozenset(s.elements())


def test_span_form_parameter():
    r = make_ring(m=4, lam=(3,))
    fp = FormParam(r, "span", (r(1),))
    assert fp.check_axioms()
    assert r(1) in fp


def test_spec_json_roundtrip():
    spec = RingSpec(m=5, f=(1, 0, 1), involution="neg", lam=(1,))
    assert RingSpec.from_json(spec.to_json()) == spec


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPECS), st.data())
def test_involution_properties(spec, data):
    r = make_ring(**spec)
    els = list(r.elements())
    a = data.draw(st.sampled_from(els))
    b = data.draw(st.sampled_from(els))
    assert a.bar.bar == a
    assert (a * b).bar == a.bar * b.bar
    assert (a + b).bar == a.bar + b.bar
    assert a - r.lam * a.bar in lambda_min(r)
