import math
from dataclasses import replace

import numpy as np
import pytest

from conftest import ho_context, ho_level
from pgo.ansatz import ExponentPolynomial, solve_exponent
from pgo.errors import NotAnEigenvalue
from pgo.potential import PotentialSpec, TruncatedPotential, truncated_taylor
from pgo.quantize import (
    QuantizationContext,
    assert_eigenvalue,
    build_matrix,
    derive_recurrence_row,
    determinant,
    eigen_levels,
    find_levels,
    indicial_exponents,
    recurrence_row,
    scan_levels,
)
from pgo.series import EvenSeries


def closed_form_row(n, E, ctx):
    """Independent closed-form oracle for the derived recurrence row."""
    tau, l, s = ctx.tau, ctx.l, ctx.pot.spec.s
    alpha = ctx.exp_poly
    row = np.zeros(ctx.dim)
    if n + 1 < ctx.dim:
        c = n + 1
        row[n + 1] = (tau + 2 * c) * (tau + 2 * c - 1) - l * (l + 1)
    row[n] = alpha.alpha(1) * (2 * tau + 4 * n + 1) + E - ctx.pot.spec.lam
    for j in range(0, s + 1):
        c = n - 1 - j
        if c < 0:
            continue
        q = j + 2
        beta_q = sum(
            alpha.alpha(i) * alpha.alpha(q - i)
            for i in range(max(1, q - (s + 1)), min(s + 1, q - 1) + 1)
        )
        v = ctx.pot.taylor[j + 1] if j + 1 < len(ctx.pot.taylor) else 0.0
        row[c] = alpha.alpha(q) * (2 * tau + 4 * c + 2 * j + 3) + beta_q - v
    return row


def test_indicial_exponents():
    e0 = indicial_exponents(0)
    assert (e0.regular, e0.irregular, e0.paper, e0.paper_is_root) == (1, 0, 0, True)
    e1 = indicial_exponents(1)
    assert (e1.regular, e1.irregular, e1.paper, e1.paper_is_root) == (2, -1, 2, True)
    e2 = indicial_exponents(2)
    assert (e2.regular, e2.irregular, e2.paper, e2.paper_is_root) == (3, -2, 6, False)


def test_context_rejects_invalid_tau(tame_pot):
    poly = solve_exponent(tame_pot)
    with pytest.raises(ValueError):
        QuantizationContext(pot=tame_pot, exp_poly=poly, l=0, tau=2, dim=3)


def test_b0_matches_printed_form(tame_ctx):
    # B_0 with tau=0 is alpha_2 + E - lambda in both modes; here tau=1
    E = 0.7
    derived = derive_recurrence_row(0, E, tame_ctx)
    paper = recurrence_row(0, E, tame_ctx)
    a2 = tame_ctx.exp_poly.alpha(1)
    expect = (1 + 2 * tame_ctx.tau) * a2 + E - tame_ctx.pot.spec.lam
    assert derived[0] == pytest.approx(expect, rel=1e-15)
    assert paper[0] == pytest.approx(expect, rel=1e-15)


def test_b0_tau0_printed_form(flagship_pot):
    # B_0 with tau=0 reads alpha_2 + E - lambda in both row sources
    poly = solve_exponent(flagship_pot)
    ctx = QuantizationContext(pot=flagship_pot, exp_poly=poly, l=0, tau=0, dim=4)
    E = -0.9
    want = poly.alpha(1) + E - flagship_pot.spec.lam
    assert derive_recurrence_row(0, E, ctx)[0] == pytest.approx(want, rel=1e-14)
    assert recurrence_row(0, E, ctx)[0] == pytest.approx(want, rel=1e-14)


def test_row0_paper_diagonal_and_bands_match_derived(tame_ctx):
    # the printed diagonal agrees with the derived balance at n=0; the printed
    # superdiagonal (tau+4c factor) differs from the derived (tau+2c) already
    # in the first row
    d = derive_recurrence_row(0, 1.3, tame_ctx)
    p = recurrence_row(0, 1.3, tame_ctx)
    tau = tame_ctx.tau
    assert p[0] == pytest.approx(d[0], rel=1e-14)
    assert d[1] == (tau + 2) * (tau + 1)
    assert p[1] == (tau + 4) * (tau + 1)


def test_paper_rows_differ_beyond_n0(tame_ctx):
    # the printed B factor grows with 2n where the derived balance has 4n
    d = derive_recurrence_row(1, 0.0, tame_ctx)
    p = recurrence_row(1, 0.0, tame_ctx)
    a2 = tame_ctx.exp_poly.alpha(1)
    assert d[1] - p[1] == pytest.approx(2 * a2, rel=1e-12)
    assert d[2] != p[2]
    # S-band entries come from the derived substitution in both modes
    d2 = derive_recurrence_row(2, 0.0, tame_ctx)
    p2 = recurrence_row(2, 0.0, tame_ctx)
    assert p2[0] == pytest.approx(d2[0], rel=1e-14)
    assert p2[1] == pytest.approx(d2[1], rel=1e-14)


def test_derived_rows_match_closed_form_oracle(flagship_pot, well_pot):
    for pot in (flagship_pot, well_pot):
        poly = solve_exponent(pot)
        ctx = QuantizationContext(pot=pot, exp_poly=poly, l=0, tau=1,
                                  dim=pot.spec.n_trunc)
        for n in range(ctx.dim):
            got = derive_recurrence_row(n, 0.37, ctx)
            want = closed_form_row(n, 0.37, ctx)
            scale = max(1.0, np.max(np.abs(want)))
            assert np.allclose(got, want, rtol=0, atol=1e-12 * scale)


def test_ho_subcase_three_term_recurrence():
    ctx = ho_context(lam=0.0, mu=1.0, dim=5)
    for n in range(1, 4):
        row = derive_recurrence_row(n, 0.0, ctx)
        assert row[n + 1] == (ctx.tau + 2 * n + 2) * (ctx.tau + 2 * n + 1)
        assert row[n] == pytest.approx(-(2 * ctx.tau + 4 * n + 1), rel=1e-15)
        assert row[: n - 1] == pytest.approx(np.zeros(n - 1), abs=1e-15)
        assert row[n - 1] == pytest.approx(0.0, abs=1e-15)  # alpha_2^2 - mu = 0


def test_e_dependence_unit_weight_on_diagonal(tame_ctx):
    for n in range(tame_ctx.dim):
        r0 = derive_recurrence_row(n, 0.0, tame_ctx)
        r1 = derive_recurrence_row(n, 2.5, tame_ctx)
        diff = r1 - r0
        assert diff[n] == pytest.approx(2.5, rel=1e-15)
        diff[n] = 0.0
        assert np.allclose(diff, 0.0, atol=0)


def test_matrix_e_affinity(tame_ctx):
    m1 = build_matrix(1.0, tame_ctx).dense()
    m2 = build_matrix(-2.0, tame_ctx).dense()
    assert np.allclose(m1 - m2, 3.0 * np.eye(tame_ctx.dim), rtol=0, atol=0)


def test_matrix_sparsity_matches_printed_7x7():
    # s=3 with a positive tail: lam=3, mu=0.2; dim = N = 7. The printed 7x7
    # pattern has one superdiagonal, bands S_0..S_2 and zeros elsewhere
    # (the would-be S_3 band is the ansatz-cancelled coupling).
    pot = truncated_taylor(PotentialSpec(3.0, 0.2, 3))
    ctx = QuantizationContext(pot=pot, exp_poly=solve_exponent(pot), l=0, tau=1, dim=7)
    m = build_matrix(0.0, ctx).dense()
    scale = np.max(np.abs(m))
    for i in range(7):
        for j in range(7):
            if j > i + 1:
                assert m[i, j] == 0.0
            if j < i - 4:
                assert m[i, j] == 0.0
            if j == i - 4:  # cancelled band
                assert abs(m[i, j]) <= 1e-14 * scale


def test_banded_matrix_dense_layout(tame_ctx):
    bm = build_matrix(0.4, tame_ctx)
    m = bm.dense()
    assert np.allclose(np.diag(m), bm.diagonal)
    for i, v in enumerate(bm.superdiagonal):
        assert m[i, i + 1] == v
    for j, band in enumerate(bm.sub_bands):
        for c, v in enumerate(band):
            assert m[c + 1 + j, c] == v


def test_determinant_dim1_root():
    ctx = ho_context(dim=1)
    e_root = ho_level(0.0, 1.0, 1, 0)  # lam - (1+2 tau) alpha_2 = 3
    sign, logmag = determinant(e_root, ctx)
    assert math.exp(logmag) < 1e-10
    s1, _ = determinant(e_root - 0.5, ctx)
    s2, _ = determinant(e_root + 0.5, ctx)
    assert s1 * s2 < 0


def test_determinant_2x2_hand_expansion(tame_ctx):
    ctx = replace(tame_ctx, dim=2)
    for e in (-1.0, 0.3, 2.7):
        m = build_matrix(e, ctx).dense()
        want = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        sign, logmag = determinant(e, ctx)
        assert sign * math.exp(logmag) == pytest.approx(want, rel=1e-12)


def test_determinant_matches_numpy_slogdet(flagship_pot):
    poly = solve_exponent(flagship_pot)
    ctx = QuantizationContext(pot=flagship_pot, exp_poly=poly, l=0, tau=1, dim=11)
    for e in (-3.0, 0.0, 1.7, 40.0):
        m = build_matrix(e, ctx).dense()
        want_sign, want_log = np.linalg.slogdet(m)
        sign, logmag = determinant(e, ctx)
        assert sign == pytest.approx(want_sign)
        assert logmag == pytest.approx(want_log, rel=1e-10)


def test_qes_sextic_exact_levels():
    """Tuned sextic oscillator V = -9 r^2 + r^6: the 2x2 truncation is exact
    with levels +-sqrt(24) (cross-checked against the grid oracle)."""
    spec = PotentialSpec(-9.0, 1.0, 1, 3)  # carrier only; taylor set by hand
    pot = TruncatedPotential(spec, EvenSeries((0.0, -9.0, 0.0, 1.0)))
    poly = ExponentPolynomial((0.0, -1.0), 1)
    ctx = QuantizationContext(pot=pot, exp_poly=poly, l=0, tau=1, dim=2)
    levels, _ = eigen_levels(ctx)
    assert levels == pytest.approx([-math.sqrt(24), math.sqrt(24)], rel=1e-12)
    from pgo.oracle import GridProblem, fd_spectrum

    grid = GridProblem(1e-4, 6.0, 4001, lambda r: -9 * r * r + r**6, 0, "regular")
    fd = fd_spectrum(grid, 2)
    assert fd[0] == pytest.approx(-math.sqrt(24), abs=2e-6)
    assert fd[1] == pytest.approx(math.sqrt(24), abs=2e-6)


def test_find_levels_ho_ladder():
    ctx = ho_context(lam=-1.0, mu=0.25, dim=6)
    sp = find_levels(ctx)
    want = [ho_level(-1.0, 0.25, 1, n) for n in range(6)]
    assert sp.levels == pytest.approx(want, rel=1e-9)
    assert sp.mismatches == ()
    # scan saw every level too
    assert len(sp.scan_levels) == 6


def test_find_levels_dim2_quadratic():
    ctx = ho_context(lam=0.5, mu=0.8, dim=2)
    m0 = build_matrix(0.0, ctx).dense()
    # det(M0 + E I) = 0: roots of the quadratic B_0 B_1 = C_1 (S_0)_0 by hand
    b = m0[0, 0] + m0[1, 1]
    c = m0[0, 0] * m0[1, 1] - m0[0, 1] * m0[1, 0]
    disc = math.sqrt(b * b / 4 - c)
    want = sorted([-b / 2 - disc, -b / 2 + disc])
    sp = find_levels(ctx)
    assert sp.levels == pytest.approx(want, rel=1e-9)


def test_scan_finds_sign_changes(tame_ctx):
    eigen, _ = eigen_levels(tame_ctx)
    roots = scan_levels(tame_ctx, (min(eigen) - 1, max(eigen) + 1), 0.05)
    for e in eigen:
        assert min(abs(e - r) for r in roots) < 1e-8


def test_method_equivalence_across_dims(tame_pot, well_pot):
    for pot, dims in ((tame_pot, (2, 3, 5, 8, 12)), (well_pot, (2, 5, 9, 12))):
        poly = solve_exponent(pot)
        for dim in dims:
            ctx = QuantizationContext(pot=pot, exp_poly=poly, l=0, tau=1, dim=dim)
            sp = find_levels(ctx)
            assert sp.mismatches == (), f"dim={dim}"


def test_flagship_eleven_by_eleven_regression(flagship_pot):
    """The published N=11 config: the 11x11 truncation admits exactly one real
    root per tau branch, and it lies below min V = 0 (a documented finding)."""
    poly = solve_exponent(flagship_pot)
    for tau, want in ((1, -0.4247744763954183), (0, -0.1680742577994784)):
        ctx = QuantizationContext(pot=flagship_pot, exp_poly=poly, l=0, tau=tau, dim=11)
        levels, discarded = eigen_levels(ctx)
        assert discarded == 10
        assert len(levels) == 1
        assert levels[0] == pytest.approx(want, abs=1e-6)


def test_assert_eigenvalue_accepts_and_rejects(tame_ctx):
    sp = find_levels(tame_ctx)
    assert_eigenvalue(sp.levels[0], tame_ctx)
    with pytest.raises(NotAnEigenvalue):
        assert_eigenvalue(sp.levels[0] + 1.0, tame_ctx)
