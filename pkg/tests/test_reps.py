import math

import numpy as np
import pytest

from qsphere.qcore import QParams, tau
from qsphere.ncalg import (
    NCPoly,
    a_gen,
    make_presentation,
    parse,
    random_words,
    sigma,
    star,
)
from qsphere.reps import (
    MatrixRep,
    dump_matrix,
    evaluate,
    load_matrix,
    max_abs,
    relation_check,
    rep_bl,
    rep_podles,
    sign_operator,
    spin_half,
    tensor_coaction,
)

P = QParams(0.5)
Q = P.q


def test_podles_plus_entries():
    rep = rep_podles(P, 1.0, "plus", 8)
    Z = rep.matrix("Z", 8)
    assert Z[0, 0] == pytest.approx(1.0, abs=1e-15)          # q^(2*0-1+1)
    X = rep.matrix("X", 8)
    assert np.all(X[:, 0] == 0.0)                            # X kills e_0
    assert X[0, 1] == pytest.approx(math.sqrt(1.5), abs=1e-14)


def test_podles_minus_entries():
    rep = rep_podles(P, 0.7, "minus", 8)
    Z = rep.matrix("Z", 8)
    for k in range(8):
        assert Z[k, k] == pytest.approx(-(Q ** (2 * k + 0.7 + 1)), abs=1e-14)


def test_podles_zzi_exact_inverse():
    rep = rep_podles(P, 2.5, "direct_sum", 16)
    out = evaluate(parse("Z*Zi", make_presentation(
        "podles", P, x=2.5, extended=True)), rep)
    assert max_abs(out - np.eye(out.shape[0])) < 1.2e-16  # one ulp


def test_a_variant_is_sign_times_direct_sum():
    x = 1.3
    ds = rep_podles(P, x, "direct_sum", 12)
    av = rep_podles(P, x, "a_variant", 12)
    e = sign_operator(ds, 12)
    for g in ("X", "Y", "Z", "Zi", "T"):
        assert max_abs(av.matrix(g, 12) - e @ ds.matrix(g, 12)) < 1e-13


def test_bl_half_a0_entries():
    rep = rep_bl(P, 0.5, 8)
    A0 = rep.matrix(a_gen(0), 8)
    for k in range(4):
        want = math.sqrt(1 - Q ** (4 * k + 4))
        got_minus = A0[rep.index("+", k, 8), rep.index("-", k, 8)]
        got_plus = A0[rep.index("-", k, 8), rep.index("+", k, 8)]
        assert got_minus == pytest.approx(want, abs=1e-14)
        assert got_plus == pytest.approx(want, abs=1e-14)


def test_bl_a_annihilates_below_floor():
    for l in (0.5, 1.5):
        rep = rep_bl(P, l, 12)
        twol = int(2 * l)
        for s in range(-twol, 0):
            A = rep.matrix(a_gen(s), 12)
            for k in range(-twol, min(-s, 12 - twol)):
                col = rep.index("+", k, 12)
                if k + s < 0:
                    assert np.all(A[:, col] == 0.0), (s, k)


def test_bl_restricts_to_podles_direct_sum():
    for l in (0.5, 1, 2):
        bl = rep_bl(P, l, 16)
        pod = rep_podles(P, 2 * l, "direct_sum", 16)
        for g in ("X", "Y", "Z", "Zi"):
            assert max_abs(bl.matrix(g, 16) - pod.matrix(g, 16)) < 1e-13


def test_spin_half_identities():
    sp = spin_half(P)
    E, F, K, Ki = sp["E"], sp["F"], sp["K"], sp["Ki"]
    assert max_abs(E @ E) == 0.0
    comm = E @ F - F @ E
    assert max_abs(comm - (K - Ki) / (Q - 1 / Q)) < 1e-15
    assert max_abs(Ki @ F - E.conj().T) < 1e-15
    assert max_abs(K @ E - Q**2 * E @ K) < 1e-15


def test_tensor_coaction_z_diagonal():
    rep = rep_podles(P, 0.7, "plus", 8)
    t2 = tensor_coaction(rep)
    Z2 = t2.matrix("Z", 8)
    assert max_abs(Z2 - np.diag(np.diag(Z2))) == 0.0
    for k in range(4):
        z = Q ** (2 * k - 0.7 + 1)
        assert Z2[2 * k, 2 * k] == pytest.approx(z * Q, abs=1e-14)
        assert Z2[2 * k + 1, 2 * k + 1] == pytest.approx(z / Q, abs=1e-14)


def test_tensor_coaction_respects_relations():
    pres = make_presentation("podles", P, x=0.7)
    rep = tensor_coaction(rep_podles(P, 0.7, "plus", 24))
    out = evaluate(parse("X*Z - q^2*Z*X", pres), rep)
    assert max_abs(out) < 1e-13


def test_evaluate_unit_and_casimir_combination():
    x = 1.0
    pres = make_presentation("uqmp", P)
    rep = rep_podles(P, x, "direct_sum", 24)
    assert max_abs(evaluate(parse("1", pres), rep)
                   - np.eye(48)) == 0.0
    combo = parse("Y*X - X*Y - (q^-1 - q)*T*Z + (q^-2 - q^2)*Z^2", pres)
    assert max_abs(evaluate(combo, rep)) < 1e-12


def test_t_scalar_matches_xyz_expression():
    # audit: T as tau(x) scalar versus q^-1 Zi (XY - 1 + q^2 Z^2); walked in
    # mp arithmetic since Zi entries grow like q^(-2k) toward the window edge
    from qsphere.reps import mp_poly_residual
    pres = make_presentation("uqmp", P)
    for x in (0.35, 1.0, 2.5):
        rep = rep_podles(P, x, "plus", 20)
        expr = parse("q^-1*Zi*X*Y - q^-1*Zi + q*Zi*Z^2", pres)
        assert mp_poly_residual(rep, expr, parse("T", pres)) < 1e-15


def test_padded_interior_exactness():
    pres = make_presentation("bl", P, l=1)
    lean = rep_bl(P, 1, 16, pad=2)
    wide = rep_bl(P, 1, 16, pad=4)
    for w in random_words(pres, 25, 5, seed=21):
        a = evaluate(NCPoly({w: 1.0}), lean)
        b = evaluate(NCPoly({w: 1.0}), wide)
        assert max_abs(a - b) < 1e-14


def test_sigma_intertwines_plus_minus():
    pres = make_presentation("uqmp", P)
    for x in (0.35, 1.7):
        rep_m = rep_podles(P, x, "minus", 16)
        rep_p = rep_podles(P, -x, "plus", 16)
        for w in random_words(pres, 20, 4, seed=31):
            poly = NCPoly({w: 1.0})
            a = evaluate(poly, rep_m)
            b = evaluate(sigma(poly), rep_p)
            assert max_abs(a - b) < 1e-11, w


def test_star_is_adjoint_in_representation():
    pres = make_presentation("bl", P, l=0.5)
    rep = rep_bl(P, 0.5, 16)
    for w in random_words(pres, 25, 4, seed=41):
        poly = NCPoly({w: 1.0 + 0.5j})
        a = evaluate(star(poly, pres), pres and rep)
        b = evaluate(poly, rep).conj().T
        assert max_abs(a - b) < 1e-11


def test_basis_monomials_linearly_independent():
    from qsphere.ncalg import basis_words
    pres = make_presentation("bl", P, l=0.5)
    rep = rep_bl(P, 0.5, 24)
    words = basis_words(pres, 5)
    vecs = np.stack([evaluate(NCPoly({w: 1.0}), rep).reshape(-1)
                     for w in words])
    svals = np.linalg.svd(vecs, compute_uv=False)
    assert svals[-1] > 1e-8 * svals[0]
    assert len(svals) == len(words)


def test_relation_check_podles_direct_sum():
    for q, x in [(0.3, 0.35), (0.5, 1.0), (0.8, 2.5)]:
        p = QParams(q)
        pres = make_presentation("podles", p, x=x, extended=True)
        rep = rep_podles(p, x, "direct_sum", 32)
        res = relation_check(pres, rep)
        assert max(res.values()) <= 1e-12, (q, x, res)


def test_relation_check_uqmp_via_podles_quotient():
    p = QParams(0.3)
    pres = make_presentation("uqmp", p)
    rep = rep_podles(p, 2.5, "direct_sum", 32)
    res = relation_check(pres, rep)
    assert max(res.values()) <= 1e-12, res


def test_relation_check_bl_all_l():
    for q in (0.3, 0.8):
        p = QParams(q)
        for l in (0, 0.5, 1, 1.5, 2):
            pres = make_presentation("bl", p, l=l)
            rep = rep_bl(p, l, 24)
            res = relation_check(pres, rep)
            assert max(res.values()) <= 1e-11, (q, l, res)


def test_relation_check_bl0_a_square_tight():
    pres = make_presentation("bl", P, l=0)
    rep = rep_bl(P, 0, 16)
    res = relation_check(pres, rep)
    assert res["A(0)*A(0)"] <= 1e-13


def test_relation_check_uqsu2_on_spin_half():
    pres = make_presentation("uqsu2", P)
    rep = MatrixRep(spin_half(P), N=2, pad=0, meta={"q": Q})
    res = relation_check(pres, rep, precise=False)
    assert max(res.values()) < 1e-14


def test_rep_validation_errors():
    with pytest.raises(ValueError):
        rep_podles(P, 1.0, "plus", 2)
    with pytest.raises(ValueError):
        rep_bl(P, 0.4, 16)
    with pytest.raises(ValueError):
        rep_bl(P, 2, 8)   # needs N >= 4l+4 = 12
    with pytest.raises(ValueError):
        rep_podles(P, 1.0, "sideways", 8)


def test_matrix_dump_roundtrip(tmp_path):
    rep = rep_podles(P, 1.0, "plus", 6)
    A = evaluate(parse("X*Y", make_presentation("podles", P, x=1.0)), rep)
    path = tmp_path / "m.txt"
    dump_matrix(A, path)
    B = load_matrix(path)
    assert B.shape == A.shape
    assert max_abs(A - B) == 0.0
