import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hlgauge.exponents import Exponent, ExponentVector
from hlgauge.mforms import (
    MultilinearForm,
    evaluate,
    norm_alternating,
    norm_sign_enum,
    norm_svd_bilinear,
    outputs,
    rank_one_norm,
    summing_norm_probe,
)
from hlgauge.tensor_norms import VectorSequence, lp_norm, mixed_norm


def loop_evaluate(coeffs, xs):
    total = 0
    for j in itertools.product(*(range(n) for n in coeffs.shape)):
        term = coeffs[j]
        for k, jk in enumerate(j):
            term = term * xs[k][jk]
        total += term
    return total


def power_method_top_singular(A, iters=5000):
    # iterate on A^H A; independent of numpy's SVD
    rng = np.random.default_rng(0)
    v = rng.standard_normal(A.shape[1]) + 0j
    for _ in range(iters):
        w = A.conj().T @ (A @ v)
        v = w / np.linalg.norm(w)
    return float(np.linalg.norm(A @ v))


def form(coeffs, p):
    return MultilinearForm(np.asarray(coeffs), ExponentVector.parse(p, np.asarray(coeffs).ndim))


def test_evaluate_basis_and_zero():
    rng = np.random.default_rng(0)
    c = rng.standard_normal((2, 3, 4))
    T = form(c, "2")
    e = [np.eye(n) for n in c.shape]
    for j in itertools.product(range(2), range(3), range(4)):
        assert evaluate(T, e[0][j[0]], e[1][j[1]], e[2][j[2]]) == c[j]
    assert evaluate(T, np.zeros(2), np.ones(3), np.ones(4)) == 0


def test_evaluate_loop_oracle():
    rng = np.random.default_rng(1)
    for field in ("real", "complex"):
        c = rng.standard_normal((3, 2, 4))
        xs = [rng.standard_normal(n) for n in c.shape]
        if field == "complex":
            c = c + 1j * rng.standard_normal(c.shape)
            xs = [x + 1j * rng.standard_normal(x.shape) for x in xs]
        T = form(c, "3")
        assert evaluate(T, *xs) == pytest.approx(loop_evaluate(c, xs), rel=1e-12)


def test_evaluate_errors():
    T = form(np.ones((2, 2)), "2")
    with pytest.raises(ValueError):
        evaluate(T, np.ones(2))
    with pytest.raises(ValueError):
        evaluate(T, np.ones(3), np.ones(2))
    with pytest.raises(ValueError):
        MultilinearForm(np.ones((2, 2)), ExponentVector.parse("2,2,2"))
    with pytest.raises(ValueError):
        MultilinearForm(np.ones((2, 2)) * 1j, ExponentVector.parse("2,2"), "real")


def test_multilinear_in_each_slot():
    rng = np.random.default_rng(2)
    T = form(rng.standard_normal((3, 3, 3)), "2")
    xs = [rng.standard_normal(3) for _ in range(3)]
    for k in range(3):
        y, a, b = rng.standard_normal(3), 1.7, -0.4
        mixed = list(xs)
        mixed[k] = a * xs[k] + b * y
        other = list(xs)
        other[k] = y
        lhs = evaluate(T, *mixed)
        rhs = a * evaluate(T, *xs) + b * evaluate(T, *other)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_outputs_match_evaluate():
    rng = np.random.default_rng(3)
    T = form(rng.standard_normal((2, 3, 2)), "2")
    seqs = [rng.standard_normal((k + 1, n)) for k, n in enumerate(T.shape)]
    out = outputs(T, seqs)
    assert out.shape == (1, 2, 3)
    for j in itertools.product(*(range(len(s)) for s in seqs)):
        assert out[j] == pytest.approx(evaluate(T, *(s[i] for s, i in zip(seqs, j))), rel=1e-12)


def test_alternating_identity_and_rank_one():
    assert norm_alternating(form(np.eye(5), "2")).value == pytest.approx(1.0, rel=1e-10)
    rng = np.random.default_rng(4)
    for p in ("2,2", "3,3/2", "inf,4", "1,2"):
        a, b = rng.standard_normal(4), rng.standard_normal(3)
        T = MultilinearForm(np.outer(a, b), ExponentVector.parse(p))
        exact = rank_one_norm([a, b], T.domain_p)
        assert exact == pytest.approx(lp_norm(a, T.domain_p[0].dual()) * lp_norm(b, T.domain_p[1].dual()))
        assert norm_alternating(T).value == pytest.approx(exact, rel=1e-9)


def test_alternating_zero_tensor():
    est = norm_alternating(form(np.zeros((2, 3)), "2"))
    assert est.value == 0 and est.degenerate
    assert all(not np.any(w) for w in est.witness)


def check_certificate(T, est):
    assert abs(evaluate(T, *est.witness)) == pytest.approx(est.value, rel=1e-10)
    for x, p in zip(est.witness, T.domain_p):
        assert lp_norm(x, p) <= 1 + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["2", "3", "inf", "3/2,4,inf"]), st.booleans())
def test_certificate_soundness(seed, p, complex_):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((3, 2, 3))
    if complex_:
        c = c + 1j * rng.standard_normal(c.shape)
    T = form(c, p)
    check_certificate(T, norm_alternating(T, restarts=5, seed=seed))


def test_monotone_ascent_trace():
    rng = np.random.default_rng(5)
    T = form(rng.standard_normal((4, 4, 4)) + 1j * rng.standard_normal((4, 4, 4)), "3,4,inf")
    est = norm_alternating(T, restarts=6, trace=True)
    for hist in est.history:
        for a, b in zip(hist, hist[1:]):
            assert b >= a * (1 - 1e-12)


def test_sign_enum_examples():
    assert norm_sign_enum(form(np.ones((2, 3, 2)), "inf")).value == 12
    assert norm_sign_enum(form(np.array([[1.0, 1.0], [1.0, -1.0]]), "inf")).value == 2


def brute_sign_norm(c):
    best = 0.0
    for xs in itertools.product(*(itertools.product((1, -1), repeat=n) for n in c.shape)):
        best = max(best, abs(loop_evaluate(c, [np.array(x) for x in xs])))
    return best


def test_sign_enum_brute_force():
    rng = np.random.default_rng(6)
    for shape in [(2, 2, 2), (3, 2), (1, 3, 2), (4,)]:
        c = rng.standard_normal(shape)
        est = norm_sign_enum(form(c, "inf"))
        assert est.value == pytest.approx(brute_sign_norm(c), rel=1e-12)
        check_certificate(form(c, "inf"), est)


def test_sign_enum_errors():
    with pytest.raises(ValueError):
        norm_sign_enum(form(np.ones((2, 2)) + 0j, "inf"))
    with pytest.raises(ValueError):
        norm_sign_enum(form(np.ones((2, 2)), "2"))
    with pytest.raises(ValueError):
        norm_sign_enum(form(np.ones((13, 12)), "inf"))


def test_sign_enum_dominates_alternating():
    rng = np.random.default_rng(7)
    for _ in range(10):
        T = form(rng.standard_normal((3, 3, 3)), "inf")
        assert norm_alternating(T).value <= norm_sign_enum(T).value * (1 + 1e-12)


def test_svd_examples_and_power_method():
    assert norm_svd_bilinear(form(np.eye(4), "2")).value == pytest.approx(1.0)
    assert norm_svd_bilinear(form(np.diag([3.0, 1.0]), "2")).value == pytest.approx(3.0)
    rng = np.random.default_rng(8)
    for complex_ in (False, True):
        A = rng.standard_normal((6, 6)) + (1j * rng.standard_normal((6, 6)) if complex_ else 0)
        T = form(A, "2")
        est = norm_svd_bilinear(T)
        check_certificate(T, est)
        assert est.value == pytest.approx(power_method_top_singular(A), rel=1e-9)
    with pytest.raises(ValueError):
        norm_svd_bilinear(form(np.eye(2), "3"))


@pytest.mark.parametrize("lam", [2.5, -0.3, 1j, 3 - 4j])
def test_scaling(lam):
    rng = np.random.default_rng(9)
    c = rng.standard_normal((3, 3, 3))
    # a complex factor changes the scalar field, so compare within that field
    T = MultilinearForm(c, ExponentVector.parse("inf,inf,inf"), "complex" if np.iscomplexobj(lam) else "real")
    S = T.scaled(lam)
    a, b = norm_alternating(T, seed=1).value, norm_alternating(S, seed=1).value
    assert b == pytest.approx(abs(lam) * a, rel=1e-10)
    if np.isrealobj(lam):
        assert norm_sign_enum(S).value == pytest.approx(abs(lam) * norm_sign_enum(T).value, rel=1e-12)
    B = form(rng.standard_normal((4, 4)), "2")
    assert norm_svd_bilinear(B.scaled(lam)).value == pytest.approx(abs(lam) * norm_svd_bilinear(B).value, rel=1e-12)


def test_permutation():
    rng = np.random.default_rng(10)
    c = rng.standard_normal((2, 3, 4))
    T = form(c, "inf")
    P = T.permuted([2, 0, 1])
    assert P.shape == (4, 2, 3)
    assert norm_sign_enum(P).value == norm_sign_enum(T).value
    T2 = MultilinearForm(c, ExponentVector.parse("2,3,inf"))
    P2 = T2.permuted([2, 0, 1])
    assert [str(p) for p in P2.domain_p] == ["inf", "2", "3"]
    assert norm_alternating(P2).value == pytest.approx(norm_alternating(T2).value, rel=1e-8)
    B = form(rng.standard_normal((3, 5)), "2")
    assert norm_svd_bilinear(B.permuted([1, 0])).value == pytest.approx(norm_svd_bilinear(B).value, rel=1e-13)


# summing norm probes

def test_probe_basis_reduces_to_mixed_norm():
    rng = np.random.default_rng(11)
    c = rng.standard_normal((3, 4))
    T = MultilinearForm(c, ExponentVector.parse("3,4"))
    # weak p*-norm of the unit basis of l_p is 1
    p_dual = T.domain_p.dual()
    fam = [(np.eye(3), np.eye(4))]
    res = summing_norm_probe(T, "2,3", p_dual, fam)
    assert res.denominators[0] == pytest.approx(1.0, rel=1e-10)
    assert res.value == pytest.approx(mixed_norm(c, "2,3"), rel=1e-10)


def test_probe_single_vectors_bounded_by_norm():
    rng = np.random.default_rng(12)
    T = form(rng.standard_normal((3, 3)), "2")
    fams = [(rng.standard_normal((1, 3)), rng.standard_normal((1, 3))) for _ in range(20)]
    res = summing_norm_probe(T, "1,1", "1,1", fams)
    for fam, qt in zip(fams, res.quotients):
        expected = abs(evaluate(T, fam[0][0], fam[1][0])) / (np.linalg.norm(fam[0]) * np.linalg.norm(fam[1]))
        assert qt == pytest.approx(expected, rel=1e-10)
    assert res.value <= norm_svd_bilinear(T).value * (1 + 1e-10)


def test_probe_sign_grid_oracle():
    """Identity bilinear form, s=(2,2), p=(1,1), sign sequences of length <= 2."""
    T = form(np.eye(2), "2")
    signs = [np.array(v, dtype=float) for v in itertools.product((1, -1), repeat=2)]
    seqs = [np.array(c) for n in (1, 2) for c in itertools.product(signs, repeat=n)]
    fams = [(a, b) for a in seqs for b in seqs]
    res = summing_norm_probe(T, "2,2", "1,1", fams)

    def weak1(X):
        # weak l_1 norm in l_2: sup over the unit circle of sum |<phi, x_j>|, by fine grid
        th = np.linspace(0, 2 * np.pi, 200001)
        phi = np.stack([np.cos(th), np.sin(th)], axis=1)
        return np.abs(phi @ X.T).sum(axis=1).max()

    best = 0.0
    for a, b in fams:
        vals = np.abs(a @ b.T)
        best = max(best, np.sqrt(np.sum(vals ** 2)) / (weak1(a) * weak1(b)))
    assert res.value == pytest.approx(best, rel=1e-9)


def test_probe_skips_zero_families():
    T = form(np.eye(2), "2")
    res = summing_norm_probe(T, "2,2", "2,2", [(np.zeros((1, 2)), np.eye(2)), (np.eye(2), np.eye(2))])
    assert res.skipped == 1 and np.isnan(res.quotients[0]) and res.best == 1


def test_exponent_type_round_trip():
    assert str(Exponent("inf").dual()) == "1"
    assert isinstance(VectorSequence(np.eye(2), 2).ambient_q, Exponent)
