"""Deterministic table and report documents for the five commands.

Identical configs produce byte-identical documents: floats are rendered with
17 significant digits in CSV (shortest round-trip repr inside JSON), rows are
generated in a fixed order, and every document embeds the resolved config.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import RunConfig
from .errors import ComputationError, NoBarrier, StepTooLarge
from .pipeline import build_pipeline
from .potential import eval_potential, harmonic_reference, truncated_taylor
from .quantize import MATCH_TOL
from .series import series_eval
from .tunneling import (
    UnitSystem,
    barrier_maximum,
    gamow_steps,
    potential_callable,
    wkb_transmission,
)
from .validation import run_validation
from .wavefunction import make_eigenpair, normalize

_NORM_CHECK_POINTS = 4001


@dataclass(frozen=True)
class TableDocument:
    filename: str
    content: str
    media_type: str


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _render(cfg: RunConfig, name: str, columns, rows, meta: dict) -> TableDocument:
    if cfg.format == "json":
        doc = {
            "table": name,
            "version": __version__,
            "config": cfg.as_dict(),
            "meta": meta,
            "columns": list(columns),
            "rows": [list(r) for r in rows],
        }
        return TableDocument(
            filename=f"{name}.json",
            content=json.dumps(doc, sort_keys=True, indent=2) + "\n",
            media_type="application/json",
        )
    lines = [f"# pgo {name} table (v{__version__})", "# config:"]
    for key, value in cfg.as_dict().items():
        lines.append(f"#   {key} = {_fmt(value)}")
    for key in sorted(meta):
        lines.append(f"# {key} = {_fmt(meta[key])}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return TableDocument(
        filename=f"{name}.csv",
        content="\n".join(lines) + "\n",
        media_type="text/csv",
    )


def build_potential_table(cfg: RunConfig) -> TableDocument:
    """Columns r, V_pgo, V_ho, V_trunc over the configured grid."""
    spec = cfg.potential_spec()
    pot = truncated_taylor(spec)
    ho = harmonic_reference(spec)
    rows = []
    for r in np.linspace(cfg.r_min, cfg.r_max, cfg.n_points):
        r = float(r)
        rows.append(
            (
                r,
                eval_potential(spec, r),
                series_eval(ho, r),
                series_eval(pot.taylor, r),
            )
        )
    return _render(cfg, "potential", ("r", "v_pgo", "v_ho", "v_trunc"), rows, {})


def build_spectrum_table(cfg: RunConfig) -> TableDocument:
    """Columns n, energy, methods_agree, oracle_energy, abs_delta."""
    from .pipeline import oracle_levels_for

    pipe = build_pipeline(cfg)
    spectrum = pipe.spectrum()
    meta = {
        "discarded_complex": spectrum.discarded_complex,
        "method": spectrum.method,
    }
    levels = list(spectrum.levels)
    if cfg.e_min is not None:
        levels = [e for e in levels if cfg.e_min <= e <= cfg.e_max]
        if not levels:
            meta["warning"] = "energy window contains no levels"
    rows = []
    if levels:
        oracle = oracle_levels_for(pipe.pot, cfg.l, min(max(len(levels), 3), 12),
                                   cfg.oracle_points)
        for n, e in enumerate(levels):
            agree = any(abs(e - r) <= MATCH_TOL for r in spectrum.scan_levels)
            nearest = min(oracle, key=lambda o: abs(e - o))
            rows.append((n, e, agree, nearest, abs(e - nearest)))
    return _render(
        cfg,
        "spectrum",
        ("n", "energy", "methods_agree", "oracle_energy", "abs_delta"),
        rows,
        meta,
    )


def build_wavefunction_table(cfg: RunConfig) -> TableDocument:
    """Columns r, psi_<n>...; header records the norm check and 1/a_0 per state."""
    from .wavefunction import eval_psi

    pipe = build_pipeline(cfg)
    spectrum = pipe.spectrum()
    meta = {}
    pairs = []
    for n in cfg.levels:
        if n >= len(spectrum.levels):
            raise ComputationError(
                f"level index {n} out of range: only {len(spectrum.levels)} levels"
            )
        pair = normalize(make_eigenpair(pipe.ctx, spectrum.levels[n]))
        pairs.append((n, pair))
        meta[f"energy_{n}"] = pair.energy
        meta[f"inverse_a0_{n}"] = pair.norm_constant
        rs = np.linspace(max(cfg.r_min, 1e-2), cfg.r_max, _NORM_CHECK_POINTS)
        vals = eval_psi(pair, rs)
        meta[f"norm_check_{n}"] = float(np.trapezoid(vals * vals * rs * rs, rs))
    r_grid = np.linspace(max(cfg.r_min, 1e-2), cfg.r_max, cfg.n_points)
    columns = ["r"] + [f"psi_{n}" for n, _ in pairs]
    rows = []
    for r in r_grid:
        r = float(r)
        rows.append((r, *[float(eval_psi(pair, r)) for _, pair in pairs]))
    return _render(cfg, "wavefunction", columns, rows, meta)


def build_transmission_tables(cfg: RunConfig) -> list[TableDocument]:
    """Energy sweep plus the step table for the configured energy."""
    spec = cfg.potential_spec()
    units = UnitSystem(cfg.hbar2_over_2m)
    v = potential_callable(spec, cfg.potential_form, cfg.potential_scale)
    r_hi = 12.0 / math.sqrt(spec.mu)
    barrier_r, barrier_v = barrier_maximum(v, r_hi)
    sweep = np.linspace(cfg.sweep_fraction * barrier_v, barrier_v, cfg.sweep_count)
    rows = []
    for e in sweep:
        e = float(e)
        t_wkb = wkb_transmission(spec, e, units, cfg.potential_form, cfg.potential_scale)
        flag = "ok"
        t_sum = t_prod = math.nan
        try:
            profile = gamow_steps(spec, e, cfg.step_length_fm, units,
                                  cfg.potential_form, cfg.potential_scale)
            t_sum, t_prod = profile.t_sum, profile.t_prod
        except NoBarrier:
            flag = "no_barrier"
            t_wkb = 1.0
            t_sum = t_prod = 1.0
        except StepTooLarge:
            flag = "step_too_large"
        rows.append((e, t_wkb, t_sum, t_prod, flag))
    sweep_doc = _render(
        cfg,
        "transmission",
        ("energy_mev", "t_wkb", "t_sum", "t_prod", "flag"),
        rows,
        {"barrier_max_mev": barrier_v, "barrier_r_fm": barrier_r},
    )
    profile = gamow_steps(spec, cfg.energy_mev, cfg.step_length_fm, units,
                          cfg.potential_form, cfg.potential_scale)
    step_rows = [
        (i, r_mid, v0, width)
        for i, (r_mid, v0, width) in enumerate(profile.steps)
    ]
    step_doc = _render(
        cfg,
        "transmission_steps",
        ("i", "r_mid_fm", "v0i_mev", "width_fm"),
        step_rows,
        {
            "energy_mev": profile.energy,
            "r1_fm": profile.r1,
            "r2_fm": profile.r2,
            "step_length_fm": profile.step_length,
            "barrier_max_mev": profile.barrier_max,
            "barrier_r_fm": profile.barrier_r,
            "max_v0i_mev": max(v0 for _, v0, _ in profile.steps),
            "t_wkb": profile.t_wkb,
            "t_sum": profile.t_sum,
            "t_prod": profile.t_prod,
            "action_sum": profile.action_sum,
        },
    )
    return [sweep_doc, step_doc]


def build_validate_report(cfg: RunConfig) -> tuple[TableDocument, bool]:
    """Machine-readable pass/fail report; second element is the hard-failure flag."""
    checks, hard_fail = run_validation(cfg)
    doc = {
        "report": "validate",
        "version": __version__,
        "config": cfg.as_dict(),
        "checks": checks,
        "summary": {
            "hard_failures": sum(1 for c in checks if c["status"] == "fail"),
            "passed": not hard_fail,
        },
    }
    content = json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"
    return (
        TableDocument("validate_report.json", content, "application/json"),
        hard_fail,
    )


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def build_documents(command: str, cfg: RunConfig) -> tuple[list[TableDocument], bool]:
    """Dispatch a command name to its builder; returns (documents, hard_fail)."""
    if command == "potential":
        return [build_potential_table(cfg)], False
    if command == "spectrum":
        return [build_spectrum_table(cfg)], False
    if command == "wavefunction":
        return [build_wavefunction_table(cfg)], False
    if command == "transmission":
        return build_transmission_tables(cfg), False
    if command == "validate":
        doc, hard_fail = build_validate_report(cfg)
        return [doc], hard_fail
    raise ValueError(f"unknown command '{command}'")
