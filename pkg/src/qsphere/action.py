"""The right module structure computed through implementing representations:
inner adjoint action, the spin-ladder laws for the grading-odd generators,
invariant functionals as weighted traces, conditional expectation, and
invariant-subspace computation.

On a two-summand space the implementer absorbs the sign operator e (the
images e*b), which is what makes the action close on the summand-swapping
generators; on summand-preserving elements the sign cancels and the absorbed
and naive actions agree.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

from .qcore import QParams, q_pochhammer
from .ncalg import NCPoly, Presentation, a_gen, basis_words, is_a_gen
from .reps import (
    MPCtx,
    TensorRep,
    combos_residual,
    max_abs,
    rep_bl,
    sign_operator,
    tensor_coaction,
    walk_dps,
)


class InnerAction:
    """Adjoint action by K, E, F through implementer matrices at a fixed
    internal size; results stay at that size (callers crop)."""

    def __init__(self, rep, M: int, absorb_sign: bool = None):
        if absorb_sign is None:
            absorb_sign = (not isinstance(rep, TensorRep)
                           and len(rep.families) == 2)
        self.rep = rep
        self.M = M
        self.q = rep.meta["q"]
        self.lam = 1.0 / (self.q - 1.0 / self.q)
        mats = {g: rep.matrix(g, M) for g in ("X", "Y", "Z", "Zi")}
        if absorb_sign:
            e = sign_operator(rep, M)
            mats = {g: e @ A for g, A in mats.items()}
        self.X, self.Y = mats["X"], mats["Y"]
        self.Z, self.Zi = mats["Z"], mats["Zi"]

    def ad_k(self, A: np.ndarray) -> np.ndarray:
        return self.Z @ A @ self.Zi

    def ad_e(self, A: np.ndarray) -> np.ndarray:
        """Note: the inverse-diagonal factor amplifies commutator rounding
        noise like q^(-2k); prefer the mp segment walks for residual checks
        on large windows."""
        return math.sqrt(self.q) * self.lam * (self.Zi @ (A @ self.X - self.X @ A))

    def ad_f(self, A: np.ndarray) -> np.ndarray:
        return (self.q ** -1.5) * self.lam * ((A @ self.Y - self.Y @ A) @ self.Zi)

    def ad(self, g: str, A: np.ndarray) -> np.ndarray:
        return {"K": self.ad_k, "E": self.ad_e, "F": self.ad_f}[g](A)

    def comm_z(self, A: np.ndarray) -> np.ndarray:
        return self.Z @ A - A @ self.Z

    def comm_x(self, A: np.ndarray) -> np.ndarray:
        return A @ self.X - self.X @ A

    def comm_y(self, A: np.ndarray) -> np.ndarray:
        return A @ self.Y - self.Y @ A


# ---------------------------------------------------------------------------
# adjoint action as segment combos (walked exactly in mp arithmetic)
# ---------------------------------------------------------------------------

def word_combos(poly) -> list:
    """Plain-letter combos of a polynomial (or a bare word)."""
    if isinstance(poly, NCPoly):
        return [(c, [(g, False) for g in w]) for w, c in poly.terms.items()]
    return [(1.0, [(g, False) for g in poly])]


def combo_ad(g: str, combos: list, q: float) -> list:
    """Apply one adjoint generator to segment combos (implementer letters)."""
    lam = 1.0 / (q - 1.0 / q)
    out = []
    for coef, segs in combos:
        if g == "K":
            out.append((coef, [("Z", True)] + segs + [("Zi", True)]))
        elif g == "E":
            c = math.sqrt(q) * lam * coef
            out.append((c, [("Zi", True)] + segs + [("X", True)]))
            out.append((-c, [("Zi", True), ("X", True)] + segs))
        elif g == "F":
            c = (q ** -1.5) * lam * coef
            out.append((c, segs + [("Y", True), ("Zi", True)]))
            out.append((-c, [("Y", True)] + segs + [("Zi", True)]))
        else:
            raise KeyError(f"adjoint action has no generator {g}")
    return out


def ad_residual(rep, g: str, poly, target, W: int = None) -> float:
    """max |ad_g(poly) - target| over the window, exact segment walks.

    target may be an NCPoly, a combo list, or None for zero.
    """
    W = rep.N if W is None else W
    combos = combo_ad(g, word_combos(poly), rep.meta["q"])
    if target is None:
        tgt = []
    elif isinstance(target, list):
        tgt = target
    else:
        tgt = word_combos(target)
    return combos_residual(rep, combos, tgt, W)


def crop(rep, A: np.ndarray, M: int, W: int) -> np.ndarray:
    idx = rep.window_indices(M, W)
    return A[np.ix_(idx, idx)]


# ---------------------------------------------------------------------------
# the spin-ladder family
# ---------------------------------------------------------------------------

def lambda_s(p: QParams, l, s: int) -> float:
    """Positive normalization making the graded generators a spin-2l ladder."""
    twol = int(2 * l)
    q2 = p.q ** 2
    num = q_pochhammer(p.q ** (2 * twol - 2 * s + 2), q2, s + twol).real
    den = q_pochhammer(q2, q2, s + twol).real
    return p.q ** (s * (s - 1) / 2) * math.sqrt(num / den)


def theta(p: QParams, l, s: int, rep, M: int) -> np.ndarray:
    twol = int(2 * l)
    if not -twol <= s <= twol:
        raise ValueError(f"s={s} outside [-{twol}, {twol}]")
    return lambda_s(p, l, s) * rep.matrix(a_gen(s), M)


def ladder_coeff_e(p: QParams, l, s: int) -> float:
    """Coefficient in theta_s <| E = c * theta_(s-1); zero exactly at the
    lowest weight s = -2l."""
    twol = int(2 * l)
    q = p.q
    if s == -twol:
        return 0.0
    return (q ** (-s - twol + 0.5) * p.lam
            * math.sqrt((1 - q ** (2 * twol + 2 * s))
                        * (1 - q ** (2 * twol - 2 * s + 2))))


def ladder_coeff_f(p: QParams, l, s: int) -> float:
    twol = int(2 * l)
    q = p.q
    if s == twol:
        return 0.0
    return (q ** (s - twol - 0.5) * p.lam
            * math.sqrt((1 - q ** (2 * twol + 2 * s + 2))
                        * (1 - q ** (2 * twol - 2 * s))))


def _theta_combo(p: QParams, l, s: int) -> list:
    return [(lambda_s(p, l, s), [(a_gen(s), False)])]


def spin2l_check(p: QParams, l, N: int) -> dict:
    """Residuals of the K/E/F ladder laws for every component, including the
    highest/lowest weight vanishing.  Walked in mp arithmetic so that the
    inverse-diagonal factor of the action does not amplify rounding noise."""
    twol = int(2 * l)
    rep = rep_bl(p, l, N)
    q = p.q
    out = {}
    for s in range(-twol, twol + 1):
        th = _theta_combo(p, l, s)
        tgt_k = [(q ** (2 * s) * lambda_s(p, l, s), [(a_gen(s), False)])]
        tgt_e = ([(ladder_coeff_e(p, l, s) * lambda_s(p, l, s - 1),
                   [(a_gen(s - 1), False)])] if s > -twol else [])
        tgt_f = ([(ladder_coeff_f(p, l, s) * lambda_s(p, l, s + 1),
                   [(a_gen(s + 1), False)])] if s < twol else [])
        out[f"K_s{s:+d}"] = combos_residual(rep, combo_ad("K", th, q), tgt_k, N)
        out[f"E_s{s:+d}"] = combos_residual(rep, combo_ad("E", th, q), tgt_e, N)
        out[f"F_s{s:+d}"] = combos_residual(rep, combo_ad("F", th, q), tgt_f, N)
    return out


def casimir_invariance(p: QParams, x: float, sign: str, N: int) -> dict:
    """Residuals of ad_K(T2)=T2, ad_E(T2)=0, ad_F(T2)=0 on the tensor window,
    the implementer being the tensored representation itself."""
    from .reps import rep_podles  # local import keeps module load order simple
    variant = "plus" if sign in (1, "+", "plus") else "minus"
    rep2 = tensor_coaction(rep_podles(p, x, variant, N))
    tw = [(1.0, [("T", False)])]
    q = p.q
    return {
        "K": combos_residual(rep2, combo_ad("K", tw, q), tw, N),
        "E": combos_residual(rep2, combo_ad("E", tw, q), [], N),
        "F": combos_residual(rep2, combo_ad("F", tw, q), [], N),
    }


# ---------------------------------------------------------------------------
# invariant functionals
# ---------------------------------------------------------------------------

def density_vector(rep, W: int) -> np.ndarray:
    """Diagonal of the positive trace-class operator implementing the
    invariant functional on a two-summand representation."""
    if len(rep.families) != 2:
        raise ValueError("the invariant functional lives on double spaces")
    q = rep.meta["q"]
    out = np.empty(2 * W)
    if rep.meta.get("kind") == "bl":
        twol = int(2 * rep.meta["l"])
        for pos, (fam, kmin) in enumerate(rep.families):
            for j in range(W):
                out[pos * W + j] = q ** (2 * (kmin + j) + twol + 1)
    else:
        x = rep.meta["x"]
        for pos, (fam, kmin) in enumerate(rep.families):
            sgn = 1.0 if fam == "-" else -1.0
            for j in range(W):
                out[pos * W + j] = q ** (2 * j + sgn * x + 1)
    return out


def inv_functional(A: np.ndarray, rep, W: int = None) -> complex:
    """trace(density * A) truncated at the window."""
    W = rep.N if W is None else W
    if A.shape[0] != 2 * W:
        raise ValueError("matrix does not match the window size")
    return complex(np.sum(density_vector(rep, W) * np.diag(A)))


def _impl_step(rep, g, fam, k, ctx, absorb: bool):
    hit = rep.step(g, fam, k, ctx)
    if hit is None:
        return None
    f2, k2, c = hit
    if absorb and f2 == "-":
        return (f2, k2, -c)
    return hit


def _diag_walk(rep, segments, fam, k, ctx, absorb: bool):
    """Value at (fam,k) of the diagonal of a product of plain-letter and
    implementer-letter steps; segments are (gen, is_implementer)."""
    cf, ck, val = fam, k, 1.0
    for g, impl in reversed(segments):
        hit = (_impl_step(rep, g, cf, ck, ctx, absorb) if impl
               else rep.step(g, cf, ck, ctx))
        if hit is None:
            return 0.0
        cf, ck, c = hit
        val *= c
    return val if (cf, ck) == (fam, k) else 0.0


def _density_value(rep, fam, k, ctx):
    if rep.meta.get("kind") == "bl":
        twol = int(2 * rep.meta["l"])
        return ctx.qpow(2 * k + twol + 1)
    return ctx.qpow(2 * k + 1, 1 if fam == "-" else -1)


def invariance_defects(word, rep, W: int, tail: int = None) -> dict:
    """Truncation defect of the invariant functional under the adjoint action
    of K, E, F on one monomial.

    The infinite-rank functional is exactly invariant, so the truncated value
    of phi(ad(M)) equals minus the discarded tail; summing the tail directly
    keeps the result accurate relative to its own size ~ q^(2W), which a head
    summation (absolute error ~1e-16 * |M|) cannot resolve.  The tail terms
    themselves sit far below double precision, so they are walked in mp
    arithmetic.
    """
    if len(rep.families) != 2:
        raise ValueError("invariance defects live on double spaces")
    q = rep.meta["q"]
    if tail is None:
        tail = max(8, int(math.ceil(16.0 * math.log(10)
                                    / (2.0 * abs(math.log(q)))))) + 4
    dps = walk_dps(rep, W + tail, slack=25)
    mw = [(g, False) for g in word]
    with mp.workdps(dps):
        ctx = MPCtx(q, rep.meta.get("x", 0.0), dps=dps)
        lam = 1 / (ctx.qpow(1) - ctx.qpow(-1))
        pref_e = ctx.sqrt(ctx.qpow(1)) * lam
        pref_f = ctx.qpow(-1) * ctx.sqrt(ctx.qpow(-1)) * lam
        sK = sE = sF = mp.mpf(0)
        for fam, kmin in rep.families:
            for k in range(kmin + W, kmin + W + tail):
                d = _density_value(rep, fam, k, ctx)
                dm = _diag_walk(rep, mw, fam, k, ctx, True)
                sK += d * (_diag_walk(
                    rep, [("Z", True)] + mw + [("Zi", True)],
                    fam, k, ctx, True) - dm)
                sE += d * pref_e * (
                    _diag_walk(rep, [("Zi", True)] + mw + [("X", True)],
                               fam, k, ctx, True)
                    - _diag_walk(rep, [("Zi", True), ("X", True)] + mw,
                                 fam, k, ctx, True))
                sF += d * pref_f * (
                    _diag_walk(rep, mw + [("Y", True), ("Zi", True)],
                               fam, k, ctx, True)
                    - _diag_walk(rep, [("Y", True)] + mw + [("Zi", True)],
                                 fam, k, ctx, True))
        return {"K": float(abs(sK)), "E": float(abs(sE)), "F": float(abs(sF))}


def conditional_expectation(A: np.ndarray) -> np.ndarray:
    """Compression onto the two diagonal summand blocks; kills every
    summand-swapping image, fixes the summand-preserving ones."""
    n = A.shape[0]
    if n % 2:
        raise ValueError("expected an even-dimensional double space")
    h = n // 2
    out = np.zeros_like(A)
    out[:h, :h] = A[:h, :h]
    out[h:, h:] = A[h:, h:]
    return out


def ergodicity_obstruction_kernel(p: QParams, l, D: int) -> int:
    """Kernel dimension of P(Z) -> (1 - q^(-2l-1)Z) P(-q^-2 Z)
    - (1 + q^(2l-1)Z) P(Z) on polynomial coefficients of degree <= D.

    A graded invariant would solve the functional equation; the kernel is
    expected to be trivial for every half-integer l.
    """
    q = p.q
    twol = int(2 * l)
    A = np.zeros((D + 2, D + 1))
    for n in range(D + 2):
        if n <= D:
            A[n, n] = (-1) ** n * q ** (-2 * n) - 1.0
        if 1 <= n <= D + 1:
            A[n, n - 1] = ((-1) ** n * q ** (-2 * n + 1 - twol)
                           - q ** (twol - 1))
    svals = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(svals < 1e-10 * max(1.0, svals[0])))


# ---------------------------------------------------------------------------
# invariant subspaces
# ---------------------------------------------------------------------------

def invariant_subspace(pres: Presentation, rep, D: int,
                       rank_window: int = 24, tensor_units: bool = False,
                       sv_threshold: float = 1e-8) -> dict:
    """Dimension and basis of the joint kernel of (ad_K - id, ad_E, ad_F) on
    the span of normal-form monomials of degree <= D.

    The conditions are imposed in the equivalent commutator form
    [M, Z'] = [M, X'] = [M, Y'] = 0 (the implementer diagonal is invertible,
    so the solution set is identical), which keeps the system free of the
    q^(-2k) noise amplification of the normalized action.  The system is
    restricted to a sub-window of exact entries; the kernel is read off a
    singular value decomposition.  Returns the kernel dimension, coefficient
    basis, monomial labels and singular-value gap diagnostics.
    """
    if D > 8:
        raise ValueError("degree guard: D must stay <= 8")
    words = basis_words(pres, D)
    maxshift = max([1] + [abs(g[1]) for w in words for g in w if is_a_gen(g)])
    M = rank_window + rep.pad * (D * maxshift + 2) + 2
    if tensor_units:
        impl = tensor_coaction(rep, absorb_sign=True)
        units = [np.zeros((2, 2), dtype=np.complex128) for _ in range(4)]
        for i in range(4):
            units[i][divmod(i, 2)] = 1.0
        act = InnerAction(impl, M, absorb_sign=False)
        idx = impl.window_indices(M, rank_window)
    else:
        impl = rep
        act = InnerAction(rep, M)
        idx = rep.window_indices(M, rank_window)

    def base_image(word):
        A = np.eye(rep.dim(M), dtype=np.complex128)
        for g in reversed(word):
            A = rep.matrix(g, M) @ A
        return A

    images, labels = [], []
    for w in words:
        B = base_image(w)
        if tensor_units:
            for i, unit in enumerate(units):
                images.append(np.kron(B, unit))
                labels.append((w, i))
        else:
            images.append(B)
            labels.append(w)

    cols_mono, cols_sys, scales = [], [], []
    for A in images:
        win = A[np.ix_(idx, idx)]
        scale = max(max_abs(win), 1e-300)
        A = A / scale
        scales.append(scale)
        cols_mono.append((win / scale).reshape(-1))
        stacked = np.concatenate([
            act.comm_z(A)[np.ix_(idx, idx)].reshape(-1),
            act.comm_x(A)[np.ix_(idx, idx)].reshape(-1),
            act.comm_y(A)[np.ix_(idx, idx)].reshape(-1),
        ])
        cols_sys.append(stacked)

    mono_sv = np.linalg.svd(np.column_stack(cols_mono), compute_uv=False)
    if mono_sv[-1] < 1e-10 * mono_sv[0]:
        raise ArithmeticError(
            f"monomial images nearly dependent (sv ratio "
            f"{mono_sv[-1] / mono_sv[0]:.2e}); shrink D")

    system = np.column_stack(cols_sys)
    svals, Vh = np.linalg.svd(system, full_matrices=False)[1:]
    thr = sv_threshold * max(1.0, float(svals[0]))
    ncols = system.shape[1]
    small = [i for i in range(len(svals)) if svals[i] < thr]
    kernel = Vh.conj().T[:, small]
    dim = len(small) + max(0, ncols - len(svals))
    sv_in_kernel = float(svals[small[0]]) if small else 0.0
    sv_above = float(svals[small[0] - 1]) if small and small[0] > 0 else float(
        svals[-1])
    return {
        "dim": int(dim),
        "kernel": kernel,
        "labels": labels,
        "scales": np.array(scales),
        "sv_largest_zero": sv_in_kernel,
        "sv_smallest_nonzero": sv_above,
    }


def kernel_residual(result: dict, label) -> float:
    """Distance of the coefficient unit vector of `label` from the kernel."""
    labels = result["labels"]
    if label not in labels:
        return 1.0
    v = np.zeros(len(labels), dtype=np.complex128)
    v[labels.index(label)] = 1.0
    Kr = result["kernel"]
    proj = Kr @ (Kr.conj().T @ v)
    return float(np.linalg.norm(v - proj))


def kernel_contains(result: dict, label, tol: float = 1e-8) -> bool:
    """Whether the coefficient unit vector of `label` lies in the kernel."""
    return kernel_residual(result, label) <= tol
