"""Command-line front end: named check suites with deterministic,
machine-readable reports.

Commands: relations, casimir, compress, theta, functional, ergodic,
theorem2, orbit, picard, oracle, all.  Exit code 0 iff every check passes,
1 on check failure, 2 on usage errors.  With --json the canonical report
replaces the human-readable summary on stdout (or goes to --out).
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .qcore import QParams, tau
from .ncalg import (
    NCPoly,
    a_gen,
    basis_words,
    is_basis_word,
    make_presentation,
    normal_form,
    random_words,
    RewriteCapError,
)
from .reps import (
    MatrixRep,
    dump_matrix,
    evaluate,
    max_abs,
    relation_check,
    rep_bl,
    rep_podles,
    spin_half,
)
from .casimir import (
    casimir_matrix,
    compress_identify,
    covered_indices,
    eigenprojection,
    eigvec_columns,
    numeric_interior_spectrum,
)
from .action import (
    casimir_invariance,
    invariance_defects,
    invariant_subspace,
    kernel_residual,
    spin2l_check,
)
from .morita import (
    a0_block,
    basis_change_checks,
    orbit_equivalent,
    picard_group,
    podles_part_compression,
    rp2_suite,
)
from .report import VerificationReport, canonical_json

TOL_RELATIONS = 1e-11
TOL_XI = 1e-12
TOL_SPECTRUM = 1e-9
TOL_COMPLETENESS = 1e-11
TOL_COMPRESS = 1e-10
TOL_COMPRESS_T = 1e-11
TOL_THETA = 1e-10
TOL_ERGODIC = 1e-8
TOL_THEOREM2 = 1e-10
TOL_SUPPORT = 1e-11
TOL_RP2 = 1e-12
TOL_ORACLE = 1e-9
SLOPE_MARGIN = 0.2


def _params(p, **extra):
    out = {"q": p.q}
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_relations(p, x, l, N, tol, algs, dump=None):
    reports = []
    for alg in algs:
        rpt = VerificationReport(
            f"relations_{alg}",
            _params(p, alg=alg, x=(x if alg in ("podles", "uqmp") else None),
                    l=(l if alg == "bl" else None), N=N, tol=tol))
        if alg == "podles":
            pres = make_presentation("podles", p, x=x)
            rep = rep_podles(p, x, "direct_sum", N)
        elif alg == "uqmp":
            pres = make_presentation("uqmp", p)
            rep = rep_podles(p, x, "direct_sum", N)
        elif alg == "bl":
            pres = make_presentation("bl", p, l=l)
            rep = rep_bl(p, l, N)
        elif alg == "uqsu2":
            pres = make_presentation("uqsu2", p)
            rep = MatrixRep(spin_half(p), N=2, pad=0, meta={"q": p.q})
        else:
            raise ValueError(f"unknown algebra {alg!r}")
        residuals = relation_check(pres, rep)
        for name, r in residuals.items():
            rpt.add(name, r, tol)
        if dump and alg != "uqsu2":
            for g in ("X", "Y", "Z"):
                dump_matrix(evaluate(NCPoly({(g,): 1.0}), rep),
                            f"{dump}.{alg}.{g}.txt")
        reports.append(rpt)
    return reports


def suite_casimir(p, x, N, dump=None):
    rpt = VerificationReport(
        "casimir",
        _params(p, x=x, N=N, tau_lower=tau(p, x - 1), tau_upper=tau(p, x + 1)))
    for sign in ("plus", "minus"):
        T2 = casimir_matrix(p, x, sign, N)
        rpt.add(f"selfadjoint_{sign}", max_abs(T2 - T2.conj().T), TOL_XI)
        vecs = {}
        for branch, tag in ((1, "upper"), (-1, "lower")):
            val = tau(p, x + branch)
            worst = 0.0
            U = eigvec_columns(p, x, sign, branch, N)
            vecs[branch] = U
            for i in range(U.shape[1]):
                worst = max(worst, float(
                    np.linalg.norm(T2 @ U[:, i] - val * U[:, i])))
            rpt.add(f"xi_residual_{sign}_{tag}", worst, TOL_XI)
        both = np.hstack([vecs[1], vecs[-1]])
        gram = both.conj().T @ both
        rpt.add(f"orthonormality_{sign}",
                max_abs(gram - np.eye(gram.shape[0])), TOL_XI)
        cov = covered_indices(N)
        ps = {b: eigenprojection(p, x, sign, b, N) for b in (1, -1)}
        for b, tag in ((1, "upper"), (-1, "lower")):
            rpt.add(f"projection_idempotent_{sign}_{tag}",
                    max_abs(ps[b] @ ps[b] - ps[b]), TOL_XI)
            rpt.add(f"projection_eigen_{sign}_{tag}",
                    max_abs(ps[b] @ T2 - tau(p, x + b) * ps[b]),
                    TOL_COMPLETENESS)
        total = (ps[1] + ps[-1])[np.ix_(cov, cov)]
        rpt.add(f"completeness_{sign}",
                max_abs(total - np.eye(len(cov))), TOL_COMPLETENESS)
        spectrum = numeric_interior_spectrum(p, x, sign, N)
        lo, hi = tau(p, x - 1), tau(p, x + 1)
        dist = np.minimum(np.abs(spectrum - lo), np.abs(spectrum - hi))
        rpt.add(f"spectrum_{sign}", float(dist.max()), TOL_SPECTRUM)
        if dump:
            dump_matrix(T2, f"{dump}.casimir.{sign}.txt")
    inv = casimir_invariance(p, x, "plus", N)
    for g, r in inv.items():
        rpt.add(f"invariance_{g}", r, TOL_COMPLETENESS)
    return [rpt]


def suite_compress(p, x, N, dump=None):
    rpt = VerificationReport("compress", _params(p, x=x, N=N))
    for sign in ("plus", "minus"):
        for branch, tag in ((1, "up"), (-1, "down")):
            crep, res = compress_identify(p, x, sign, branch, N)
            for key, r in res.items():
                if key.startswith("generator_"):
                    rpt.add(f"{key}_{sign}_{tag}", r, TOL_COMPRESS)
            rpt.add(f"t_scalar_{sign}_{tag}", res["t_scalar"], TOL_COMPRESS_T)
            rpt.add(f"relations_{sign}_{tag}", res["relations"], TOL_COMPRESS)
            if sign == "plus":
                rpt.add(f"z_positive_distinct_{tag}",
                        res["z_positive_distinct"], 0.0)
            if dump:
                for g in ("X", "Y", "Z"):
                    dump_matrix(crep.matrix(g, crep.N),
                                f"{dump}.compress.{sign}.{tag}.{g}.txt")
    return [rpt]


def suite_theta(p, l, N):
    rpt = VerificationReport("theta", _params(p, l=l, N=N, tol=TOL_THETA))
    for name, r in spin2l_check(p, l, N).items():
        rpt.add(name, r, TOL_THETA)
    return [rpt]


def suite_functional(p, x, l, N):
    rpt = VerificationReport("functional", _params(p, x=x, l=l, N=N))
    windows = (N - 16, N)
    slope_target = 2.0 * math.log(p.q)
    for tag, pres, rep_of in (
        ("podles", make_presentation("podles", p, x=x),
         lambda W: rep_podles(p, x, "direct_sum", W)),
        ("bl", make_presentation("bl", p, l=l),
         lambda W: rep_bl(p, l, W)),
    ):
        words = basis_words(pres, 4)
        worst = {}
        for W in windows:
            rep = rep_of(W)
            acc = {"K": 0.0, "E": 0.0, "F": 0.0}
            for w in words:
                d = invariance_defects(w, rep, W)
                for key in acc:
                    acc[key] = max(acc[key], d[key])
            worst[W] = acc
            bound = 100.0 * p.q ** (2 * (W - 8))
            rpt.add(f"{tag}_bound_N{W}", max(acc.values()), bound)
        for key in ("E", "F"):
            lo, hi = worst[windows[0]][key], worst[windows[1]][key]
            if lo <= 0 or hi <= 0:
                rpt.add(f"{tag}_slope_{key}", 0.0,
                        SLOPE_MARGIN * abs(slope_target))
                continue
            slope = (math.log(hi) - math.log(lo)) / (windows[1] - windows[0])
            rpt.add(f"{tag}_slope_{key}", abs(slope - slope_target),
                    SLOPE_MARGIN * abs(slope_target))
    return [rpt]


def suite_ergodic(p, x, l, D, N):
    rank_window = min(24, N)
    rpt = VerificationReport(
        "ergodic", _params(p, x=x, l=l, D=D, N=N, rank_window=rank_window))
    pres = make_presentation("podles", p, x=x)
    rep = rep_podles(p, x, "direct_sum", N)
    out = invariant_subspace(pres, rep, D, rank_window=rank_window)
    rpt.add("podles_dim", abs(out["dim"] - 1), 0.0)
    rpt.add("podles_sv_gap",
            out["sv_largest_zero"] / max(out["sv_smallest_nonzero"], 1e-300),
            1e-3)
    pres_b = make_presentation("bl", p, l=l)
    rep_b = rep_bl(p, l, N)
    out_b = invariant_subspace(pres_b, rep_b, D, rank_window=rank_window)
    expected = 2 if l == 0 else 1
    rpt.add("bl_dim", abs(out_b["dim"] - expected), 0.0)
    if l == 0:
        rpt.add("bl0_basis_unit", kernel_residual(out_b, ()), TOL_ERGODIC)
        rpt.add("bl0_basis_a0", kernel_residual(out_b, (a_gen(0),)),
                TOL_ERGODIC)
        out_t = invariant_subspace(pres_b, rep_b, D,
                                   rank_window=min(16, rank_window),
                                   tensor_units=True)
        rpt.add("b0m2_dim", abs(out_t["dim"] - 4), 0.0)
    return [rpt]


def suite_theorem2(p, l, N):
    rpt = VerificationReport("theorem2", _params(p, l=l, N=N))
    for name, r in basis_change_checks(p, l, N).items():
        rpt.add(name, r, TOL_COMPLETENESS)
    branches = [(1, "up")] + ([(-1, "down")] if l > 0 else [])
    for branch, tag in branches:
        _, res = a0_block(p, l, branch, N)
        rpt.add(f"a0_match_{tag}", res["match"], TOL_THEOREM2)
        rpt.add(f"a0_wrong_summand_{tag}", res["wrong_summand"], TOL_SUPPORT)
        rpt.add(f"a0_cross_{tag}", res["cross"], TOL_SUPPORT)
    for name, r in podles_part_compression(p, l, N).items():
        rpt.add(f"sphere_compress_{name}", r, TOL_THEOREM2)
    for name, r in rp2_suite(p, N).items():
        rpt.add(f"rp2_{name}", r, TOL_RP2)
    return [rpt]


def suite_orbit(p, x, y):
    eq, m = orbit_equivalent(x, y)
    rpt = VerificationReport(
        "orbit", _params(p, x=_param_repr(x), y=_param_repr(y),
                         equivalent=eq, witness=m))
    rpt.add("orbit_equivalent", 0.0 if eq else 1.0, 0.0)
    if eq and m is not None:
        rpt.add("witness_identity",
                abs(abs(float(x) + m) - abs(float(y))), 1e-12)
    return [rpt]


def suite_picard(p, x):
    group = picard_group(x)
    rpt = VerificationReport(
        "picard", _params(p, x=_param_repr(x), group=group))
    rpt.add("classified", 0.0, 0.0)
    return [rpt]


def suite_oracle(p, x, l, N, seed, count):
    reports = []
    targets = [("podles", make_presentation("podles", p, x=x),
                rep_podles(p, x, "direct_sum", N)),
               ("bl", make_presentation("bl", p, l=l), rep_bl(p, l, N))]
    for tag, pres, rep in targets:
        rpt = VerificationReport(
            f"oracle_{tag}",
            _params(p, x=(x if tag == "podles" else None),
                    l=(l if tag == "bl" else None), N=N, seed=seed,
                    count=count))
        worst = 0.0
        cap_hits = 0
        span_fail = 0
        for w in random_words(pres, count, 6, seed=seed):
            poly = NCPoly({w: 1.0})
            try:
                nf = normal_form(poly, pres)
            except RewriteCapError:
                cap_hits += 1
                continue
            if not all(is_basis_word(v, pres) for v in nf.terms):
                span_fail += 1
            worst = max(worst, max_abs(
                evaluate(poly, rep) - evaluate(nf, rep)))
        rpt.add("residual", worst, TOL_ORACLE)
        rpt.add("cap_hits", float(cap_hits), 0.0)
        rpt.add("basis_span_failures", float(span_fail), 0.0)
        reports.append(rpt)
    return reports


def _param_repr(v):
    return v if isinstance(v, str) else float(v)


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _sphere_param(text: str):
    if text.lower() in ("standard", "inf", "infinity"):
        return "standard"
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="verify",
        description="certify the quantized-sphere algebra identities at "
                    "finite truncation")
    ap.add_argument("command", choices=[
        "relations", "casimir", "compress", "theta", "functional",
        "ergodic", "theorem2", "orbit", "picard", "oracle", "all"])
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--x", type=_sphere_param, default=0.7)
    ap.add_argument("--y", type=_sphere_param, default=None)
    ap.add_argument("--l", type=float, default=1.0)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--D", type=int, default=6)
    ap.add_argument("--tol", type=float, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--alg", default=None,
                    choices=["podles", "uqmp", "bl", "uqsu2"])
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--out", default=None, metavar="PATH")
    ap.add_argument("--dump", default=None, metavar="PATH")
    return ap


def run(argv) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if isinstance(args.x, str) and args.command not in ("orbit", "picard"):
            ap.error("only orbit/picard accept the standard sphere")
        if args.command == "orbit" and args.y is None:
            ap.error("orbit needs --y")
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    p = QParams(args.q, tol=args.tol or 1e-11)
    x = args.x

    reports = []
    cmd = args.command
    if cmd == "relations":
        algs = [args.alg] if args.alg else ["podles", "uqmp", "bl"]
        reports += suite_relations(p, x, args.l, args.N,
                                   args.tol or TOL_RELATIONS, algs, args.dump)
    elif cmd == "casimir":
        reports += suite_casimir(p, x, args.N, args.dump)
    elif cmd == "compress":
        reports += suite_compress(p, x, args.N, args.dump)
    elif cmd == "theta":
        reports += suite_theta(p, args.l, args.N)
    elif cmd == "functional":
        reports += suite_functional(p, x, args.l, args.N)
    elif cmd == "ergodic":
        reports += suite_ergodic(p, x, args.l, args.D, args.N)
    elif cmd == "theorem2":
        reports += suite_theorem2(p, args.l, args.N)
    elif cmd == "orbit":
        reports += suite_orbit(p, x, args.y)
    elif cmd == "picard":
        reports += suite_picard(p, x)
    elif cmd == "oracle":
        reports += suite_oracle(p, x, args.l, args.N, args.seed, args.count)
    elif cmd == "all":
        reports += suite_relations(p, 1.0, 1.0, args.N, TOL_RELATIONS,
                                   ["podles", "uqmp", "bl"])
        reports += suite_casimir(p, 0.7, args.N)
        reports += suite_compress(p, 0.7, args.N)
        reports += suite_theta(p, 1.0, args.N)
        reports += suite_functional(p, 1.0, 0.5, args.N)
        reports += suite_ergodic(p, 1.0, 0.0, args.D, args.N)
        reports += suite_theorem2(p, 0.5, args.N)
        reports += suite_orbit(p, 0.3, 1.7)
        reports += suite_picard(p, 0.0)
        reports += suite_oracle(p, 1.0, 0.5, min(args.N, 48), args.seed,
                                args.count)

    if args.json or args.out:
        payload = canonical_json(reports, __version__)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload)
        if args.json and not args.out:
            sys.stdout.write(payload)
            sys.stdout.write("\n")
    if not (args.json and not args.out):
        for rpt in sorted(reports, key=lambda r: r.check):
            for line in rpt.summary_lines():
                print(line)
    return 0 if all(r.status == "pass" for r in reports) else 1


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
