import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from dweit.dressed import frame_for
from dweit.errors import DegenerateSubspace, NotDegenerate, PoleEncountered, SingularSystem
from dweit.model import SystemParams, scaled, validate_params
from dweit.steady import (
    Branch,
    LinearSystem,
    build_linear_system,
    closed_form_coherence,
    closed_form_vector,
    degenerate_coherence,
    population_aa,
    solve_steady,
    standard_eit_coherence,
    steady_coherences,
)

from conftest import rel_diff


# ---------------------------------------------------------------------------
# linear-system construction
# ---------------------------------------------------------------------------


def test_all_couplings_off_gives_diagonal_system():
    p = validate_params(SystemParams(omega_ac=0.0, gamma_a=2.0, g_a=0.0, g_b=1.0, g_c=0.0))
    sys_b = build_linear_system(p, 0.4, Branch.B)
    off_diag = sys_b.m - np.diag(np.diag(sys_b.m))
    assert np.all(off_diag == 0)
    x = solve_steady(sys_b)
    # two-level Lorentzian of the decoupled excited coherence
    assert x[0] == pytest.approx(sys_b.a[0] / sys_b.m[0, 0], rel=1e-14)
    mags = []
    for dp in np.linspace(-2, 2, 41):
        s = build_linear_system(p, dp, Branch.B)
        mags.append(abs(s.a[0] / s.m[0, 0]))
    mags = np.array(mags)
    # |x1| ~ 1/sqrt((dp + g_eff/2)^2 + gamma^2) peaks at dp = -g_eff/2
    assert np.argmax(mags) == np.argmin(np.abs(np.linspace(-2, 2, 41) + 0.5))


def test_drive_vector_value_symmetric_case():
    p = validate_params(SystemParams(omega_ac=2.0, gamma_a=2.0, omega_ab=1.0, phi_ab=0.3, g_b=1.0, g_c=1.0))
    sys_b = build_linear_system(p, 0.0, Branch.B)
    expected = 1j * 0.5 * cmath.exp(-0.3j) * (1 / math.sqrt(2)) * 0.5
    assert sys_b.a[0] == pytest.approx(expected, rel=1e-15)
    assert np.all(sys_b.a[1:] == 0)


def test_diagonal_real_parts(narrow_params):
    # the a-rows decay at gamma_ab; the C rows carry no ground-state decay
    for branch in Branch:
        sys_b = build_linear_system(narrow_params, 0.2, branch)
        diag = np.diag(sys_b.m)
        assert_allclose(diag.real, [1.0, 0.0, 0.0, 1.0], atol=1e-15)


def test_block_rotation_rates_are_dressed_energy_differences():
    # independent cross-check: each coherence rotates at the difference of
    # single-particle dressed energies (rotating frame, bare b at zero)
    p = validate_params(
        SystemParams(
            omega_ac=1.7,
            gamma_a=2.0,
            g_a=0.02,
            g_b=0.05,
            g_c=0.08,
            delta_bb=0.03,
            delta_cc=-0.04,
            delta_mu=0.6,
            u_bb=0.2,
            u_cb=-0.1,
            u_ab=0.05,
        )
    )
    from dweit.model import with_probe_detuning_shifts

    delta_p = 0.9
    dp, dm = with_probe_detuning_shifts(p, delta_p)
    geb = math.hypot(p.delta_bb, p.g_b)
    gec = math.hypot(p.delta_cc, p.g_c)
    r_a = dp
    r_c = dp - dm
    energies = {
        "B": -0.5 * geb,
        "Bprime": +0.5 * geb,
        "C": r_c - 0.5 * gec,
        "Cprime": r_c + 0.5 * gec,
    }
    for branch, ground in ((Branch.B, "B"), (Branch.BPRIME, "Bprime")):
        sys_b = build_linear_system(p, delta_p, branch)
        rates = np.diag(sys_b.m).imag
        expected = [
            r_a - energies[ground],
            energies["C"] - energies[ground],
            energies["Cprime"] - energies[ground],
            r_a - energies[ground],
        ]
        assert_allclose(rates, expected, rtol=1e-14)


def test_solve_path_peaks_at_plus_half_gb(narrow_params):
    dps = 1e-4 + np.linspace(-4e-8, 4e-8, 33)
    im = [abs((steady_coherences(narrow_params, dp).rho_ab).imag) for dp in dps]
    assert abs(dps[int(np.argmax(im))] - 1e-4) <= 4e-8 / 16


# ---------------------------------------------------------------------------
# solve_steady
# ---------------------------------------------------------------------------


def test_solve_identity():
    sys_b = LinearSystem(m=np.eye(4, dtype=complex), a=np.array([1, 0, 0, 0], dtype=complex), branch=Branch.B)
    assert_allclose(solve_steady(sys_b), sys_b.a, atol=0)


def test_solve_diagonal():
    d = np.array([2.0, 1j, 3 - 1j, 0.5], dtype=complex)
    a = np.array([1.0, 2.0, 3.0, 4.0], dtype=complex)
    sys_b = LinearSystem(m=np.diag(d), a=a, branch=Branch.B)
    assert_allclose(solve_steady(sys_b), a / d, rtol=1e-15)


def test_solve_singular_raises():
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0
    sys_b = LinearSystem(m=m, a=np.array([1, 0, 0, 0], dtype=complex), branch=Branch.B)
    with pytest.raises(SingularSystem):
        solve_steady(sys_b)


def test_solve_warns_when_ill_conditioned():
    from dweit.errors import IllConditioned

    m = np.diag(np.array([1.0, 1e-13, 1.0, 1.0], dtype=complex))
    sys_b = LinearSystem(m=m, a=np.array([1, 1, 1, 1], dtype=complex), branch=Branch.B)
    with pytest.warns(IllConditioned):
        x = solve_steady(sys_b)
    assert x[1] == pytest.approx(1e13, rel=1e-12)


def test_solve_matches_closed_form_mid_window(broad_params):
    got = steady_coherences(broad_params, 0.3).rho_ab
    want = closed_form_coherence(broad_params, 0.3)
    assert rel_diff(got, want) <= 1e-10


def test_solve_vector_matches_closed_form_vector(broad_params):
    for branch in Branch:
        x = solve_steady(build_linear_system(broad_params, 0.3, branch))
        v = closed_form_vector(broad_params, 0.3, branch)
        assert np.linalg.norm(x - v) <= 1e-10 * np.linalg.norm(v)


def test_solve_path_local_max_at_half_gb_broad(broad_params):
    # exaggerated-tunneling narrow peak at g_b/2 = 0.05, located by the
    # linear-solve route over a +/- 0.01 neighborhood
    dps = 0.05 + np.linspace(-0.01, 0.01, 81)
    im = [steady_coherences(broad_params, dp).rho_ab.imag for dp in dps]
    assert abs(dps[int(np.argmax(im))] - 0.05) <= dps[1] - dps[0]


# ---------------------------------------------------------------------------
# closed form vs oracles
# ---------------------------------------------------------------------------


def test_standard_eit_limit_exact(standard_params):
    p = standard_params
    dps = np.linspace(-4.0, 4.0, 1000)
    got = closed_form_coherence(p, dps)
    want = standard_eit_coherence(dps, p.omega_ac, p.gamma_ab, p.omega_ab, p.phi_ab)
    err = np.abs(got - want) / np.abs(want)
    assert err.max() <= 1e-12


def test_central_zero_is_exact_when_gb_equals_gc(narrow_params):
    assert closed_form_coherence(narrow_params, 0.0) == 0
    assert population_aa(narrow_params, 0.0) == 0


def test_central_value_nonzero_when_gb_differs_from_gc():
    p = validate_params(SystemParams(omega_ac=2.0, gamma_a=2.0, g_b=2e-4, g_c=1e-4))
    coh = closed_form_coherence(p, 0.0)
    assert coh != 0 and abs(coh) < 1e-3


def test_narrow_peak_is_local_max_of_im(narrow_params):
    eps = np.linspace(-1e-6, 1e-6, 201)
    im = np.imag(closed_form_coherence(narrow_params, 1e-4 + eps))
    k = int(np.argmax(im))
    assert abs(eps[k]) <= eps[1] - eps[0]


def test_degenerate_equals_closed_form(narrow_params, rng):
    for _ in range(50):
        dp = rng.uniform(-4, 4)
        a = degenerate_coherence(narrow_params, dp)
        b = closed_form_coherence(narrow_params, dp)
        assert rel_diff(a, b) <= 1e-12


def test_degenerate_requires_symmetric_wells():
    p = validate_params(SystemParams(gamma_a=2.0, g_b=1e-4, g_c=1e-4, delta_bb=1e-5))
    with pytest.raises(NotDegenerate):
        degenerate_coherence(p, 0.1)
    q = validate_params(SystemParams(gamma_a=2.0, g_b=0.0, g_c=1e-4))
    with pytest.raises(DegenerateSubspace):
        degenerate_coherence(q, 0.1)


def test_preparation_angle_kills_plus_branch(narrow_params):
    p = scaled(narrow_params, phi_prep=math.pi / 4)
    from dweit.steady import branch_coherence_terms

    term_b, term_bp = branch_coherence_terms(p, 1e-4)
    assert term_bp == 0  # amplitude factor (1 - sin 2 phi) is exactly zero
    assert term_b != 0


def test_spectral_parity(narrow_params):
    dps = np.linspace(1e-5, 3.0, 400)
    plus = closed_form_coherence(narrow_params, dps)
    minus = closed_form_coherence(narrow_params, -dps)
    assert np.max(np.abs(plus.imag - minus.imag)) <= 1e-10
    assert np.max(np.abs(plus.real + minus.real)) <= 1e-10


def test_branch_exchange_swaps_amplitudes():
    base = dict(omega_ac=2.0, gamma_a=2.0, g_b=2e-4, g_c=2e-4)
    phi = 0.3
    p = validate_params(SystemParams(phi_prep=phi, **base))
    q = validate_params(SystemParams(phi_prep=math.pi / 2 - phi, **base))
    # mapping (phi -> pi/2 - phi, delta_p -> -delta_p) swaps the two
    # resonance amplitudes: the mapped spectrum's +g_b/2 peak carries the
    # height the original had at -g_b/2, and vice versa
    h_p = {s: float(np.imag(closed_form_coherence(p, s * 1e-4))) for s in (+1, -1)}
    mapped = {s: float(np.imag(closed_form_coherence(q, -s * 1e-4))) for s in (+1, -1)}
    assert rel_diff(mapped[+1], h_p[-1]) <= 1e-7
    assert rel_diff(mapped[-1], h_p[+1]) <= 1e-7
    assert rel_diff(h_p[+1], h_p[-1]) > 0.1  # the two heights genuinely differ


def test_reflection_with_negated_phi_is_exact():
    base = dict(omega_ac=2.0, gamma_a=2.0, g_b=2e-4, g_c=2e-4)
    phi = 0.3
    p = validate_params(SystemParams(phi_prep=phi, **base))
    q = validate_params(SystemParams(phi_prep=-phi, **base))
    dps = np.linspace(-3, 3, 1001)
    im_p = np.imag(closed_form_coherence(p, dps))
    im_q = np.imag(closed_form_coherence(q, -dps))
    assert np.max(np.abs(im_p - im_q)) <= 1e-12 * np.max(np.abs(im_p))


def test_oracle_chain_random_draws(rng):
    for _ in range(60):
        omega = rng.uniform(0.5, 4.0)
        p = validate_params(
            SystemParams(
                omega_ac=omega,
                gamma_a=2.0,
                gamma_ab=1.0,
                g_a=10 ** rng.uniform(-5, -1),
                g_b=10 ** rng.uniform(-5, -1),
                g_c=10 ** rng.uniform(-5, -1),
                phi_prep=rng.uniform(0, math.pi / 2),
                delta_mu=rng.uniform(-0.5, 0.5),
                delta_bb=rng.choice([0.0, rng.uniform(-1e-3, 1e-3)]),
                delta_cc=rng.choice([0.0, rng.uniform(-1e-3, 1e-3)]),
            )
        )
        dp = rng.uniform(-2 * omega, 2 * omega)
        closed = closed_form_coherence(p, dp)
        solved = steady_coherences(p, dp).rho_ab
        assert rel_diff(closed, solved) <= 1e-9


def test_assembly_identity(narrow_params):
    f = frame_for(narrow_params)
    sc = steady_coherences(narrow_params, 0.37)
    assert sc.rho_ab == pytest.approx(f.cos_b * sc.x_b[0] - f.sin_b * sc.x_bp[0], rel=1e-15)
    assert sc.rho_aa >= 0.0
    assert abs(sc.rho_ab) <= 1.0


def test_closed_form_vector_residual(broad_params):
    from dweit.oracle import residual

    for branch in Branch:
        sys_b = build_linear_system(broad_params, 0.3, branch)
        vec = closed_form_vector(broad_params, 0.3, branch)
        assert residual(sys_b, vec) <= 1e-9


@given(phi_ab=st.floats(-math.pi, math.pi), phi_ac=st.floats(-math.pi, math.pi))
@settings(max_examples=60, deadline=None)
def test_phase_invariances(phi_ab, phi_ac):
    base = validate_params(SystemParams(omega_ac=2.0, gamma_a=2.0, g_b=1e-3, g_c=2e-3))
    p = scaled(base, phi_ab=phi_ab, phi_ac=phi_ac)
    dp = 0.7
    ref = closed_form_coherence(base, dp) * cmath.exp(1j * base.phi_ab)
    got_closed = closed_form_coherence(p, dp) * cmath.exp(1j * phi_ab)
    got_solved = steady_coherences(p, dp).rho_ab * cmath.exp(1j * phi_ab)
    assert rel_diff(got_closed, ref) <= 1e-12
    assert rel_diff(got_solved, ref) <= 1e-9


def test_probe_linearity_is_bitwise(narrow_params):
    p2 = scaled(narrow_params, omega_ab=2.0 * narrow_params.omega_ab)
    for dp in (0.0, 1e-4, 0.3, -1.1):
        a = closed_form_coherence(narrow_params, dp)
        b = closed_form_coherence(p2, dp)
        assert b == 2.0 * a  # doubling the probe scales by an exact power of two


def test_g_a_has_negligible_effect(narrow_params):
    with_ga = scaled(narrow_params, g_a=narrow_params.g_b)
    dps = np.concatenate(
        [np.linspace(-3, 3, 501), 1e-4 + np.linspace(-4e-8, 4e-8, 101), -1e-4 + np.linspace(-4e-8, 4e-8, 101)]
    )
    a = closed_form_coherence(narrow_params, dps)
    b = closed_form_coherence(with_ga, dps)
    assert np.max(np.abs(a - b)) <= 1e-3 * np.max(np.abs(a))


# ---------------------------------------------------------------------------
# populations and the textbook formula
# ---------------------------------------------------------------------------


def test_population_quadratic_in_probe(narrow_params):
    p2 = scaled(narrow_params, omega_ab=2.0 * narrow_params.omega_ab)
    r1 = population_aa(narrow_params, 1e-4)
    r2 = population_aa(p2, 1e-4)
    assert r2 == pytest.approx(4.0 * r1, rel=1e-12)
    assert r1 > 0.0


def test_population_peaks_on_resonance(narrow_params):
    on_peak = population_aa(narrow_params, 1e-4)
    off_peak = population_aa(narrow_params, 2e-4)
    assert on_peak / off_peak > 1e3


def test_population_nonnegative_over_scan(narrow_params):
    dps = np.linspace(-3, 3, 2001)
    assert np.min(population_aa(narrow_params, dps)) >= -1e-15


def test_standard_eit_zero_at_line_center():
    assert standard_eit_coherence(0.0, 2.0, 1.0, 1.0, 0.0) == 0


def test_standard_eit_direct_substitution():
    got = standard_eit_coherence(1.0, 2.0, 1.0, 1.0, 0.0)
    assert got == pytest.approx(0.5j, rel=1e-15)


def test_standard_eit_autler_townes_pole():
    small = standard_eit_coherence(1.0, 2.0, 1e-10, 1.0, 0.0)
    assert abs(small) > 1e8


def test_pole_encountered_at_zero_damping():
    p = SystemParams(omega_ac=2.0, gamma_a=2.0, gamma_ab=0.0, g_b=0.1, g_c=0.1)
    with pytest.raises(PoleEncountered):
        closed_form_coherence(p, 0.05)  # exactly on the undamped resonance
