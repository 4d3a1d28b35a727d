import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlgauge.exponents import Exponent, ExponentVector, schedule_inclusion
from hlgauge.experiments.holder_chain import holder_chain_weights
from hlgauge.tensor_norms import lp_norm, mixed_norm


def chain_sides(a, r, p, q):
    s = schedule_inclusion(r, p, q).s
    lam = holder_chain_weights(a, r, p, q)
    lhs = mixed_norm(a, s)
    for w, pk, qk in zip(lam, p, q):
        t = Exponent.from_reciprocal(pk.reciprocal - qk.reciprocal)
        lhs *= lp_norm(w, t)
    b = a.copy()
    for k, w in enumerate(lam):
        shape = [1] * a.ndim
        shape[k] = -1
        b = b * w.reshape(shape)
    rhs = mixed_norm(b, ExponentVector.isotropic(r, a.ndim))
    return lhs, rhs


def test_paper_parameter_sets():
    rng = np.random.default_rng(0)
    for r, p, q, shape in [("3", "3,2", "5,2", (3, 4)), ("2", "2,2,1", "3,3,1", (2, 3, 2))]:
        pv, qv = ExponentVector.parse(p), ExponentVector.parse(q)
        for _ in range(50):
            a = np.abs(rng.standard_normal(shape))
            lhs, rhs = chain_sides(a, Exponent(r), pv, qv)
            assert lhs <= rhs * (1 + 1e-12)


def test_trivial_weights_when_q_equals_p():
    a = np.abs(np.random.default_rng(1).standard_normal((3, 3)))
    lam = holder_chain_weights(a, 2, "3,4", "3,4")
    assert all(np.array_equal(w, np.ones(3)) for w in lam)


def test_rejects_bad_hypotheses():
    with pytest.raises(ValueError):
        holder_chain_weights(np.ones((2, 2)), 2, "3,3", "2,3")


fracs = st.fractions(min_value=0, max_value=1, max_denominator=8)


@st.composite
def chain_case(draw):
    m = draw(st.integers(1, 3))
    p_rec = [draw(fracs) for _ in range(m)]
    q_rec = [x * draw(fracs) for x in p_rec]
    r_rec = draw(fracs)
    if not r_rec - sum(p_rec) + sum(q_rec) > 0 or r_rec == 0:
        r_rec = sum(p_rec) - sum(q_rec) + draw(st.fractions(min_value=0, max_value=1, max_denominator=8).filter(lambda x: x > 0))
    if r_rec > 1 or any(x == 0 for x in p_rec):
        # keep every exponent finite and at least 1
        return None
    shape = tuple(draw(st.integers(1, 4)) for _ in range(m))
    seed = draw(st.integers(0, 2**31))
    return (Exponent.from_reciprocal(r_rec), ExponentVector(tuple(Exponent.from_reciprocal(x) for x in p_rec)),
            ExponentVector(tuple(Exponent.from_reciprocal(x) for x in q_rec)), shape, seed)


@settings(max_examples=300, deadline=None)
@given(chain_case())
def test_chain_inequality_property(case):
    if case is None:
        return
    r, p, q, shape, seed = case
    res = schedule_inclusion(r, p, q)
    if not res.hypothesis_ok:
        return
    a = np.abs(np.random.default_rng(seed).standard_normal(shape))
    lhs, rhs = chain_sides(a, r, p, q)
    assert lhs <= rhs * (1 + 1e-10)
