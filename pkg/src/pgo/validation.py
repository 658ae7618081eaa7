"""Cross-validation suite behind the validate command.

Each check returns {name, status, details} with status pass | fail | info.
Info checks report findings (for example paper-mode versus derived-mode row
differences, or quasi-exact roots with no oracle partner when no level passes
the physical acceptance gate); they never fail the run.
"""

from __future__ import annotations

import math

import numpy as np

from .ansatz import ExponentPolynomial, exponent_residual, solve_exponent
from .config import RunConfig
from .errors import ComputationError
from .oracle import GridProblem, fd_spectrum, numerov_shoot
from .pipeline import (
    Pipeline,
    accepted_levels,
    barrier_top,
    build_pipeline,
    oracle_levels_for,
    potential_minimum,
)
from .potential import (
    PotentialSpec,
    TruncatedPotential,
    eval_potential,
    truncated_taylor,
)
from .quantize import QuantizationContext, derive_recurrence_row, recurrence_row
from .series import EvenSeries, series_eval
from .wavefunction import count_nodes, make_eigenpair, normalize, ode_residual

GAP_RTOL = 1e-12
ORACLE_MATCH_RTOL = 1e-3
DUAL_ORACLE_RTOL = 1e-5
HO_CAL_ATOL = 1e-6
RESIDUAL_TOL = 1e-6


def _check(name, ok, details, info=False):
    status = "info" if info else ("pass" if ok else "fail")
    return {"name": name, "status": status, "details": details}


def check_gap_property(pot: TruncatedPotential) -> dict:
    spec = pot.spec
    scale = max(abs(c) for c in pot.taylor.coeffs)
    gap = [abs(pot.taylor[k]) for k in range(2, spec.s + 1)]
    ok = (
        pot.taylor[0] == spec.lam
        and abs(pot.taylor[1] - spec.mu) <= 1e-12 * abs(spec.mu)
        and all(g <= GAP_RTOL * scale for g in gap)
    )
    return _check(
        "taylor_gap_property",
        ok,
        {"entries_2_to_s": gap, "scale": scale, "entry0": pot.taylor[0],
         "entry1": pot.taylor[1]},
    )


def check_taylor_pointwise(pot: TruncatedPotential) -> dict:
    """|series - closed form| must shrink like r^(2(N+1)) toward the origin."""
    import warnings

    spec = pot.spec
    n = spec.n_trunc
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        wider = truncated_taylor(PotentialSpec(spec.lam, spec.mu, spec.s, n + 1))
    c_ref = abs(wider.taylor[n + 1])
    rs = np.logspace(math.log10(0.05), 0.0, 25)
    worst = 0.0
    for r in rs:
        diff = abs(series_eval(pot.taylor, r) - eval_potential(spec, r))
        # roundoff floor: evaluation noise scales with sum |c_k| r^(2k)
        magnitude = sum(abs(c) * r ** (2 * k) for k, c in enumerate(pot.taylor.coeffs))
        bound = 2.0 * c_ref * r ** (2 * (n + 1)) + 64 * np.finfo(float).eps * magnitude
        worst = max(worst, diff / bound)
    ok = worst <= 1.0
    return _check(
        "taylor_pointwise_consistency",
        ok,
        {"worst_ratio_to_bound": worst, "tail_coefficient": c_ref},
    )


def check_exponent(pot: TruncatedPotential, exp_poly: ExponentPolynomial) -> dict:
    resid = exponent_residual(exp_poly, pot)
    scale = max(1e-300, max(abs(c) for c in pot.taylor.coeffs))
    ok = all(abs(x) <= 1e-12 * scale for x in resid)
    return _check(
        "exponent_tail_cancellation",
        ok,
        {"residual": list(resid), "leading_alpha": exp_poly.alphas[-1]},
    )


def check_method_equivalence(pipe: Pipeline) -> dict:
    spectrum = pipe.spectrum()
    ok = len(spectrum.mismatches) == 0
    return _check(
        "method_equivalence",
        ok,
        {
            "levels": list(spectrum.levels),
            "scan_levels": list(spectrum.scan_levels),
            "mismatches": list(spectrum.mismatches),
            "discarded_complex": spectrum.discarded_complex,
        },
    )


def check_ho_calibration() -> dict:
    """Both oracles must reproduce E_n = 4n+3 for R'' + (E - r^2) R = 0."""
    problem = GridProblem(1e-4, 10.0, 3001, lambda r: r * r, 0, "regular")
    fd = fd_spectrum(problem, 3)
    exact = [3.0, 7.0, 11.0]
    fd_err = max(abs(a - b) for a, b in zip(fd, exact))
    shoot = [numerov_shoot(problem, (e - 0.5, e + 0.5)) for e in exact]
    shoot_err = max(abs(a - b) for a, b in zip(shoot, exact))
    ok = fd_err <= HO_CAL_ATOL and shoot_err <= HO_CAL_ATOL
    return _check(
        "oracle_ho_calibration",
        ok,
        {"fd": fd, "numerov": shoot, "fd_err": fd_err, "numerov_err": shoot_err},
    )


def check_dual_oracle(pot: TruncatedPotential, l: int, count: int = 3) -> dict:
    """FD and Numerov must agree on the lowest levels of V_trunc."""
    fd = oracle_levels_for(pot, l, count)
    top = barrier_top(pot)
    r_max = top[0] if top else None
    errs = []
    shoot = []
    for e in fd:
        problem = GridProblem(
            1e-4,
            r_max if r_max is not None else _confining_radius(pot, e),
            3001,
            lambda r: series_eval(pot.taylor, r),
            l,
            "regular",
        )
        try:
            es = numerov_shoot(problem, (e - 0.3 * max(1.0, abs(e)), e + 0.3 * max(1.0, abs(e))))
        except ComputationError as exc:
            shoot.append(None)
            errs.append(math.inf)
            continue
        shoot.append(es)
        errs.append(abs(es - e) / max(1.0, abs(e)))
    ok = all(x <= DUAL_ORACLE_RTOL for x in errs)
    return _check(
        "dual_oracle_agreement",
        ok,
        {"fd": fd, "numerov": shoot, "rel_err": errs},
    )


def _confining_radius(pot: TruncatedPotential, e: float) -> float:
    from .pipeline import oracle_domain

    return oracle_domain(pot, e)[1]


def check_quasi_exact_vs_oracle(pipe: Pipeline) -> dict:
    """Accepted roots must match an oracle level to 1e-3; others are findings."""
    spectrum = pipe.spectrum()
    accepted = accepted_levels(spectrum, pipe.pot)
    count = max(len(spectrum.levels), 3)
    oracle = oracle_levels_for(pipe.pot, pipe.ctx.l, min(count, 12))
    rows = []
    ok = True
    top = barrier_top(pipe.pot)
    for e in spectrum.levels:
        delta = min((abs(e - o) / max(1.0, abs(o)) for o in oracle), default=math.inf)
        gated = e in accepted
        if gated and delta > ORACLE_MATCH_RTOL:
            ok = False
        rows.append({"level": e, "accepted": gated, "best_oracle_rel_delta": delta})
    return _check(
        "quasi_exact_vs_oracle",
        ok,
        {
            "barrier_top": None if top is None else top[1],
            "min_potential": potential_minimum(pipe.pot),
            "oracle_levels": oracle,
            "comparison": rows,
            "note": "roots outside the physical gate are findings, not failures",
        },
    )


def _ho_context(lam: float = 0.0, mu: float = 1.0, dim: int = 6) -> QuantizationContext:
    """Harmonic sub-case: V = [lam, mu], p = -sqrt(mu) r^2 / 2; exactly solvable."""
    spec = PotentialSpec(lam, mu, 1, 3)
    taylor = EvenSeries((lam, mu, 0.0, 0.0))
    pot = TruncatedPotential(spec, taylor)
    exp_poly = ExponentPolynomial((-math.sqrt(mu), 0.0), 1)
    return QuantizationContext(pot=pot, exp_poly=exp_poly, l=0, tau=1, dim=dim)


def check_residual_and_nodes(pipe: Pipeline | None) -> dict:
    """Residual and node laws on accepted pairs plus the HO calibration pairs."""
    rows = []
    ok = True
    ctx = _ho_context()
    expected = [math.sqrt(1.0) * (4 * n + 3) for n in range(3)]
    for n, e in enumerate(expected):
        pair = normalize(make_eigenpair(ctx, e))
        grid = np.linspace(0.1, 6.0, 60)
        resid = ode_residual(pair, grid)
        nodes = count_nodes(pair, 8.0)
        good = resid <= RESIDUAL_TOL and nodes == n
        ok = ok and good
        rows.append({"case": f"ho_n{n}", "energy": e, "residual": resid,
                     "nodes": nodes, "expected_nodes": n})
    if pipe is not None:
        spectrum = pipe.spectrum()
        accepted = accepted_levels(spectrum, pipe.pot)
        for e in accepted:
            pair = normalize(make_eigenpair(pipe.ctx, e))
            grid = np.linspace(0.1, 6.0, 60)
            resid = ode_residual(pair, grid)
            idx = accepted.index(e)
            nodes = count_nodes(pair, _confining_radius(pipe.pot, e))
            good = resid <= RESIDUAL_TOL and nodes == idx
            ok = ok and good
            rows.append({"case": "accepted", "energy": e, "residual": resid,
                         "nodes": nodes, "expected_nodes": idx})
    return _check("residual_and_node_laws", ok, {"pairs": rows})


def check_paper_vs_derived(ctx: QuantizationContext) -> dict:
    """Entrywise diffs between printed and derived rows; reported, never failed."""
    diffs = []
    for n in range(ctx.dim):
        d = derive_recurrence_row(n, 0.0, ctx)
        p = recurrence_row(n, 0.0, ctx)
        delta = float(np.max(np.abs(d - p)))
        diffs.append(delta)
    return _check(
        "paper_vs_derived_rows",
        True,
        {"max_abs_diff_per_row": diffs,
         "note": "printed B/C factors agree with the derived balance at n=0 only"},
        info=True,
    )


def check_determinism(cfg: RunConfig) -> dict:
    from .tables import build_potential_table

    doc1 = build_potential_table(cfg)
    doc2 = build_potential_table(cfg)
    ok = doc1.content == doc2.content
    return _check("render_determinism", ok, {"bytes": len(doc1.content)})


def run_validation(cfg: RunConfig, exp_poly_override: ExponentPolynomial | None = None):
    """Full suite; returns (checks, hard_fail)."""
    checks = []
    pot = truncated_taylor(cfg.potential_spec())
    checks.append(check_gap_property(pot))
    checks.append(check_taylor_pointwise(pot))
    pipe = None
    try:
        exp_poly = exp_poly_override or solve_exponent(pot)
        checks.append(check_exponent(pot, exp_poly))
        if exp_poly_override is None:
            pipe = build_pipeline(cfg)
    except ComputationError as exc:
        checks.append(
            {
                "name": "exponent_tail_cancellation",
                "status": "fail",
                "details": {"blocked": f"{type(exc).__name__}: {exc}"},
            }
        )
    if pipe is not None:
        checks.append(check_method_equivalence(pipe))
        checks.append(check_quasi_exact_vs_oracle(pipe))
        checks.append(check_paper_vs_derived(pipe.ctx))
    checks.append(check_ho_calibration())
    checks.append(check_dual_oracle(pot, cfg.l))
    checks.append(check_residual_and_nodes(pipe))
    checks.append(check_determinism(cfg))
    hard_fail = any(c["status"] == "fail" for c in checks)
    return checks, hard_fail
