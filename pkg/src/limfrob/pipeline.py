"""Section builders: run a module pipeline and collect checks plus data."""

from __future__ import annotations

from .algebra.linalg import nilpotent_block_sizes
from .connection import (BASES, curvature, gauge_transform, pairing_flat_check,
                         residue_x)
from .family import (build_A0, build_Ainf, build_connection, build_pairing, build_R,
                     derive_basis, gauge_matrix)
from .frobenius import (family_fts, fts_axiom_check, homogeneity_check, limit_manifold,
                        log_structure, manifold_checks)
from .limits import (jordan_data, limit_fts, limit_identity_checks,
                     nongraded_counterexample, preprimitive_check, v_filtration)
from .report import Check, Report, Section, enc_matrix, enc_poly, enc_rational
from .spectrum import build_spectrum, check_spectrum_symmetries

COMMANDS = ("spectrum", "connection", "check", "limit", "manifold", "log", "all")
PAIRED_BASES = ("omega", "phi", "flat")
RESIDUE_RANGES = {
    # basis: (lo, hi, closed_lo, closed_hi)
    "phi": (0, 1, True, False),
    "psi": (-1, 0, False, True),
}


def spectrum_section(sp) -> Section:
    return Section(check_spectrum_symmetries(sp), {
        "s": [enc_rational(v) for v in sp.s],
        "alpha": [enc_rational(v) for v in sp.alpha],
        "runs": [{"value": enc_rational(v), "length": k} for v, k in sp.runs],
    })


def connection_section(sp) -> Section:
    checks, data = [], {"bases": {}}
    forms = {b: build_connection(sp, b) for b in BASES}
    for b, C in forms.items():
        checks.append(Check(f"curvature-{b}", "zero-curvature", curvature(C).is_zero()))
        res = residue_x(C)
        entry = {
            "ramification": C.ramification,
            "residue_eigenvalues": None if res.eigenvalues is None
            else [enc_rational(v) for v in res.eigenvalues],
            "residue_theta_free": res.theta_free,
        }
        if b != "flat":
            entry["A0"] = enc_matrix(build_A0(sp, b), laurent=True)
            entry["R"] = enc_matrix(build_R(sp, b))
        data["bases"][b] = entry
        if b in RESIDUE_RANGES:
            lo, hi, cl, ch = RESIDUE_RANGES[b]
            checks.append(Check(f"residue-theta-free-{b}", "residue-char-poly", res.theta_free))
            checks.append(Check(f"residue-range-{b}", "residue-eigenvalue-range",
                                res.in_range(lo, hi, cl, ch),
                                "" if res.eigenvalues is not None else "eigenvalues not rational"))
    for b in ("phi", "psi"):
        checks.append(Check(f"gauge-omega-to-{b}", "diagonal-gauge",
                            gauge_transform(forms["omega"], gauge_matrix(sp, b), b) == forms[b]))
    for b in PAIRED_BASES:
        for c in pairing_flat_check(forms[b], build_pairing(sp, b)):
            c.name = f"{c.name}-{b}"
            checks.append(c)
    data["Ainf"] = enc_matrix(build_Ainf(sp))
    return Section(checks, data)


def derivation_section(sp) -> Section:
    checks = []
    d = None
    for b in ("omega", "phi", "psi"):
        d_b = derive_basis(sp.weights, b)
        d = d or d_b
        checks.append(Check(f"derived-A0-{b}", "ladder-reconstruction", d_b.A0 == build_A0(sp, b)))
    first = d.sections[1]
    checks.append(Check("first-step-u0", "ladder-first-step",
                        d.schedule[0] == 0 and first.exponents == tuple(-w for w in sp.weights)))
    return Section(checks, {
        "schedule": d.schedule,
        "schedule_count": d.schedule_count,
        "ties": [k for k, c in enumerate(d.candidates) if len(c) > 1],
        "exponents": [list(s.exponents) for s in d.sections],
    })


def fts_section(sp) -> Section:
    checks = []
    for b in PAIRED_BASES:
        for c in fts_axiom_check(family_fts(sp.weights, b)):
            c.name = f"{c.name}-{b}"
            checks.append(c)
    return Section(checks, {"r": sp.n})


def limit_section(sp) -> Section:
    L = limit_fts(sp)
    _, B = v_filtration(sp)
    jd = jordan_data(sp)
    runs = [k for _, k in sp.runs]
    blocks = [b for _, sizes in jd for b in sizes]
    hom, e0_pp, any_pp = preprimitive_check(L)
    ng = nongraded_counterexample(sp)
    graded = sp.mu == sp.n + 1
    checks = limit_identity_checks(L) + [
        Check("jordan-runs", "jordan-blocks-runs", blocks == runs,
              f"blocks {blocks} vs runs {runs}"),
        Check("homogeneous-e0", "preprimitive-dichotomy", hom),
        Check("preprimitive-dichotomy", "preprimitive-dichotomy", any_pp == graded,
              f"any pre-primitive = {any_pp}, mu = n+1 is {graded}"),
        Check("e0-preprimitive-dichotomy", "preprimitive-dichotomy", e0_pp == graded),
        Check("nongraded-dichotomy", "nongraded-counterexample", ng.is_fts == graded),
    ]
    if not graded:
        checks.append(Check("nongraded-witness", "nongraded-counterexample",
                            ng.witness == (sp.n, sp.mu - 1),
                            f"witness {ng.witness}: {ng.lhs} vs {ng.rhs}"))
    return Section(checks, {
        "R0": enc_matrix(L.R0),
        "Rinf": enc_matrix(L.Rinf),
        "g": enc_matrix(L.g),
        "B": enc_matrix(B, laurent=True),
        "jordan": [{"alpha": enc_rational(a), "blocks": list(s)} for a, s in jd],
        "preprimitive": {"homogeneous": hom, "e0": e0_pp, "any": any_pp},
        "nongraded": {"is_fts": ng.is_fts,
                      "witness": list(ng.witness) if ng.witness else None,
                      "values": None if ng.witness is None
                      else [enc_rational(ng.lhs), enc_rational(ng.rhs)]},
    })


def log_section(sp) -> Section:
    rep = log_structure(sp.weights)
    graded = sp.mu == sp.n + 1
    phi0 = rep.section("phi_0")
    checks = [
        Check("metric-dichotomy", "log-metric", rep.metric_nondegenerate == graded,
              f"rank {rep.metric_rank_at_0} of {sp.mu} at x=0"),
        Check("phi0-log-preprimitive", "log-section-phi0",
              phi0.flat and phi0.IC and phi0.GC and phi0.EC),
        Check("omega0-not-injective", "log-section-omega0", not rep.section("omega_0").IC),
        Check("psi0-generation-dichotomy", "log-section-psi0",
              rep.section("psi_0").GC == graded),
    ]
    if not graded:
        top = rep.section(f"psi_{sp.n + 1}")
        checks.append(Check("psi-top-not-flat", "log-section-psi-top",
                            not top.flat and top.IC and top.GC and top.EC))
    return Section(checks, {
        "metric_rank_at_0": rep.metric_rank_at_0,
        "metric_nondegenerate": rep.metric_nondegenerate,
        "sections": [{"label": s.label, "basis": s.basis, "index": s.index, "flat": s.flat,
                      "IC": s.IC, "GC": s.GC, "EC": s.EC} for s in rep.sections],
    })


def manifold_section(n: int) -> Section:
    F = limit_manifold(n)
    names = F.var_names()
    degree, rem = homogeneity_check(F)
    return Section(manifold_checks(F), {
        "potential": enc_poly(F.potential, names),
        "euler": [enc_poly(e, names) for e in F.euler],
        "homogeneity_degree": enc_rational(degree),
        "homogeneity_remainder": enc_poly(rem, names),
        "product": {f"{i + 1},{j + 1}": next((k + 1 for k, v in enumerate(vec) if v), None)
                    for i, row in enumerate(F.product) for j, vec in enumerate(row)},
        "potential_text": F.potential.format(names),
    })


def obstruction_text(sp) -> str:
    blocks = nilpotent_block_sizes(limit_fts(sp).R0)
    return (f"no pre-primitive section (mu = {sp.mu} >= n+2 = {sp.n + 2}; "
            f"[A0] has {len(blocks)} Jordan blocks at eigenvalue 0)")


def run(command: str, weights) -> Report:
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    sp = build_spectrum(weights)
    rep = Report(command, list(sp.weights), sp.mu, sp.n)
    S = rep.sections
    if command in ("spectrum", "check", "all"):
        S["spectrum"] = spectrum_section(sp)
    if command in ("connection", "check", "all"):
        S["connection"] = connection_section(sp)
    if command in ("check", "all"):
        S["derivation"] = derivation_section(sp)
        S["fts"] = fts_section(sp)
    if command in ("limit", "check", "all"):
        S["limit"] = limit_section(sp)
    if command in ("log", "all"):
        S["log"] = log_section(sp)
    if command in ("manifold", "all"):
        if sp.mu == sp.n + 1:
            S["manifold"] = manifold_section(sp.n)
        else:
            rep.obstruction = obstruction_text(sp)
    return rep


def _run_args(args):
    return run(*args)


def run_many(command: str, grid, jobs: int = 1) -> list:
    tasks = [(command, w) for w in grid]
    if jobs > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            return pool.map(_run_args, tasks)
    return [run(c, w) for c, w in tasks]


def weight_grid(nmax: int, wmax: int) -> list:
    """Weight multisets (sorted tuples): the family only depends on the multiset."""
    from itertools import combinations_with_replacement

    return [w for n in range(1, nmax + 1)
            for w in combinations_with_replacement(range(1, wmax + 1), n)]
