import math

import numpy as np
import pytest

from qsphere.qcore import QParams, tau
from qsphere.casimir import (
    EigenData,
    branch_indices,
    casimir_matrix,
    closed_form_eigvec,
    compress_identify,
    covered_indices,
    eigenprojection,
    eigvec_columns,
    numeric_interior_spectrum,
)
from qsphere.reps import max_abs

P = QParams(0.5)
Q = P.q

SIGNS = ("plus", "minus")
BRANCHES = (1, -1)
XS = (0.35, 1.0, 2.5)


def test_casimir_block_structure_matches_closed_form():
    x, N = 0.7, 16
    T2 = casimir_matrix(P, x, "plus", N)
    lam_inv = Q - 1 / Q
    for k in range(6):
        a = tau(P, x) / Q - (1 / Q - Q) * Q ** (2 * k - x + 2)
        b = tau(P, x) * Q + (1 / Q - Q) * Q ** (2 * k - x + 2)
        c = lam_inv * math.sqrt(
            (1 - Q ** (2 * k + 2)) * (1 + Q ** (2 * k - 2 * x + 2)))
        i, j = 2 * k, 2 * (k + 1) + 1
        assert T2[i, i] == pytest.approx(a, abs=1e-13)
        assert T2[j, j] == pytest.approx(b, abs=1e-13)
        assert T2[i, j] == pytest.approx(c, abs=1e-13)
        assert T2[j, i] == pytest.approx(c, abs=1e-13)
        # the 2x2 block is the whole story for these two columns
        col = T2[:, i].copy()
        col[[i, j]] = 0.0
        assert max_abs(col) < 1e-13


def test_casimir_orphan_eigenvalue():
    x, N = 0.7, 12
    T2 = casimir_matrix(P, x, "plus", N)
    assert T2[1, 1] == pytest.approx(tau(P, x + 1), abs=1e-13)
    col = T2[:, 1].copy()
    col[1] = 0.0
    assert max_abs(col) < 1e-13


def test_casimir_is_selfadjoint():
    T2 = casimir_matrix(P, 1.0, "minus", 24)
    assert max_abs(T2 - T2.conj().T) < 1e-12


def test_minus_matrix_mirrors_plus():
    for x in (0.35, 1.7):
        A = casimir_matrix(P, x, "minus", 16)
        B = casimir_matrix(P, -x, "plus", 16)
        assert max_abs(A + B) < 1e-12


def test_closed_form_eigvec_residuals():
    N = 32
    for x in XS:
        for sign in SIGNS:
            T2 = casimir_matrix(P, x, sign, N)
            for branch in BRANCHES:
                val = tau(P, x + branch)
                for k in branch_indices(sign, branch, N):
                    v = closed_form_eigvec(P, x, sign, branch, k, N)
                    assert np.linalg.norm(T2 @ v - val * v) < 1e-12


def test_first_plus_branch_vector_is_orphan():
    v = closed_form_eigvec(P, 0.7, "plus", 1, 0, 12)
    want = np.zeros(24)
    want[1] = 1.0
    assert np.linalg.norm(v - want) < 1e-13


def test_eigvec_orthonormality_and_cross_branch():
    N = 24
    for sign in SIGNS:
        U = eigvec_columns(P, 1.3, sign, 1, N)
        V = eigvec_columns(P, 1.3, sign, -1, N)
        both = np.hstack([U, V])
        gram = both.conj().T @ both
        assert max_abs(gram - np.eye(gram.shape[0])) < 1e-12


def test_eigenprojection_properties():
    N = 24
    x = 0.35
    for sign in SIGNS:
        T2 = casimir_matrix(P, x, sign, N)
        ps = {}
        for branch in BRANCHES:
            p = eigenprojection(P, x, sign, branch, N)
            ps[branch] = p
            assert max_abs(p @ p - p) < 1e-12
            assert max_abs(p - p.conj().T) < 1e-13
            val = tau(P, x + branch)
            assert max_abs(p @ T2 - val * p) < 1e-11
            k_count = len(branch_indices(sign, branch, N))
            assert np.trace(p).real == pytest.approx(k_count, abs=1e-10)
        cov = covered_indices(N)
        total = (ps[1] + ps[-1])[np.ix_(cov, cov)]
        assert max_abs(total - np.eye(len(cov))) < 1e-11


def test_minus_projections_mirror_plus_with_branches_swapped():
    N, x = 16, 0.8
    for branch in BRANCHES:
        a = eigenprojection(P, x, "minus", branch, N)
        b = eigenprojection(P, -x, "plus", -branch, N)
        assert max_abs(a - b) < 1e-12


def test_numeric_interior_spectrum_two_valued():
    for x in XS:
        for sign in SIGNS:
            vals = numeric_interior_spectrum(P, x, sign, 32)
            assert len(vals) > 20
            lo, hi = tau(P, x - 1), tau(P, x + 1)
            dist = np.minimum(np.abs(vals - lo), np.abs(vals - hi))
            assert dist.max() < 1e-9


def test_eigendata_invariants():
    ed = EigenData(P, 1.0, "plus", 1, 20)
    norms = np.linalg.norm(ed.vectors, axis=0)
    assert np.max(np.abs(norms - 1.0)) < 1e-13
    assert ed.value == pytest.approx(tau(P, 2.0), abs=1e-15)


def test_compress_identify_matches_shifted_representation():
    N = 32
    for x in XS:
        for sign in SIGNS:
            for branch in BRANCHES:
                crep, res = compress_identify(P, x, sign, branch, N)
                gen_res = max(v for k, v in res.items()
                              if k.startswith("generator_"))
                assert gen_res < 1e-10, (x, sign, branch, res)
                assert res["t_scalar"] < 1e-11
                assert res["relations"] < 1e-10
                if sign == "plus":
                    assert res["z_positive_distinct"] == 0.0
