import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from steklov_dirichlet.shell import (
    ShellSpec,
    alpha_pm,
    bounds_report,
    f_profile,
    f_second,
    rbar,
    shell_boundary_mass,
    shell_eigenfunction,
    shell_gradient_energy,
    shell_sigma1,
    upper_bound_perimeter_chain,
    upper_bound_volume,
)


def radial_rayleigh(n, R1, R2):
    """Rayleigh quotient of w by radial quadrature; w written out independently."""
    if n == 2:
        w = lambda r: math.log(r) - math.log(R1)
        dw = lambda r: 1 / r
    else:
        w = lambda r: 1 / R1 ** (n - 2) - 1 / r ** (n - 2)
        dw = lambda r: (n - 2) / r ** (n - 1)
    energy, _ = integrate.quad(lambda r: dw(r) ** 2 * r ** (n - 1), R1, R2, epsabs=0, epsrel=1e-13, limit=200)
    # the sphere area factor cancels
    return energy / (R2 ** (n - 1) * w(R2) ** 2)


@pytest.mark.parametrize(
    "n,R1,R2,expected",
    [(2, 1.0, math.e, 1 / math.e), (3, 1.0, 2.0, 0.5), (2, 1.0, 2.0, 1 / (2 * math.log(2)))],
)
def test_shell_sigma1_examples(n, R1, R2, expected):
    assert shell_sigma1(ShellSpec(n, R1, R2)) == pytest.approx(expected, rel=1e-14)


def test_shell_sigma1_small_hole_limit():
    # decay is only logarithmic: 1/ln(1/R1)
    vals = [shell_sigma1(ShellSpec(2, 10.0**-k, 1.0)) for k in (5, 50, 300)]
    assert vals[1] == pytest.approx(1 / (50 * math.log(10)), rel=1e-14)
    assert vals[0] > vals[1] > vals[2] > 0
    assert vals[2] < 1.5e-3
    assert shell_sigma1(ShellSpec(3, 1e-50, 1.0)) < 1e-3


@pytest.mark.parametrize("n,R1,R2", [(2, 1, 2), (2, 0.3, 5), (3, 1, 2), (4, 0.5, 0.9), (5, 2, 7), (7, 1, 1.3)])
def test_shell_sigma1_matches_radial_quadrature(n, R1, R2):
    assert shell_sigma1(ShellSpec(n, R1, R2)) == pytest.approx(radial_rayleigh(n, R1, R2), rel=1e-10)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_shell_near_degenerate_gap_is_stable(n):
    R1, eps = 1.0, 1e-9
    spec = ShellSpec(n, R1, R1 + eps)
    # thin-shell asymptotics: sigma ~ 1/eps
    assert shell_sigma1(spec) * eps == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("bad", [(1, 1, 2), (2, 2, 1), (2, 0, 1), (2, 1, 1), (2.5, 1, 2)])
def test_shellspec_rejects_invalid(bad):
    with pytest.raises(ValueError):
        ShellSpec(*bad)


@pytest.mark.parametrize("n,R1,r,expected", [(2, 1, 1, 0.0), (3, 1, 2, 0.5), (2, 0.5, math.e * 0.5, 1.0)])
def test_shell_eigenfunction_examples(n, R1, r, expected):
    assert shell_eigenfunction(ShellSpec(n, R1, 10.0), r) == pytest.approx(expected, abs=1e-15)


def test_shell_eigenfunction_rejects_inside_hole():
    with pytest.raises(ValueError):
        shell_eigenfunction(ShellSpec(2, 1, 2), 0.5)


@pytest.mark.parametrize("n", [2, 3, 4, 8])
def test_shell_eigenfunction_increasing(n):
    spec = ShellSpec(n, 0.7, 5.0)
    vals = [shell_eigenfunction(spec, r) for r in np.linspace(0.7, 5.0, 200)]
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("n,R1,R2", [(2, 1, 3), (3, 0.5, 2), (5, 1, 1.5)])
def test_energy_over_mass_is_sigma(n, R1, R2):
    spec = ShellSpec(n, R1, R2)
    assert shell_gradient_energy(spec) / shell_boundary_mass(spec) == pytest.approx(shell_sigma1(spec), rel=1e-13)


@given(
    n=st.integers(2, 7),
    R1=st.floats(0.01, 10),
    frac=st.floats(0.01, 0.99),
    ratio=st.floats(1.01, 50),
)
@settings(max_examples=200, deadline=None)
def test_monotone_in_inner_radius(n, R1, frac, ratio):
    R2 = R1 * ratio
    r1 = R1 + frac * (R2 - R1)
    assert shell_sigma1(ShellSpec(n, r1, R2)) > shell_sigma1(ShellSpec(n, R1, R2))


@pytest.mark.parametrize("t", [0.1, 2, 17])
@pytest.mark.parametrize("n,R1,R2", [(2, 1, 2), (3, 0.4, 1.9), (6, 1, 3)])
def test_scaling(n, R1, R2, t):
    base = shell_sigma1(ShellSpec(n, R1, R2))
    assert shell_sigma1(ShellSpec(n, t * R1, t * R2)) == pytest.approx(base / t, rel=1e-12)


# ---------------------------------------------------------------------------


@pytest.mark.parametrize("R1", [1.0, 0.2])
def test_upper_bound_dominates_shell_2d(R1):
    R2 = R1 * math.e
    V = math.pi * (R2**2 - R1**2)
    bound = upper_bound_volume(2, R1, V)
    assert math.isfinite(bound) and bound >= shell_sigma1(ShellSpec(2, R1, R2))


def test_upper_bound_dominates_shell_3d():
    V = 4 * math.pi / 3 * (2**3 - 1)
    assert upper_bound_volume(3, 1.0, V) >= 0.5


def test_upper_bound_decays_for_large_volume():
    vals = [upper_bound_volume(2, 1.0, V) for V in (1e2, 1e4, 1e6, 1e8)]
    assert np.all(np.diff(vals) < 0) and vals[-1] < 1e-3


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("V", [0.01, 1.0, 300.0])
def test_perimeter_chain_member_equals_volume_bound(n, V):
    assert upper_bound_perimeter_chain(n, 0.8, V) == pytest.approx(upper_bound_volume(n, 0.8, V), rel=1e-13)


def test_upper_bound_rejects_nonpositive():
    with pytest.raises(ValueError):
        upper_bound_volume(2, 1.0, 0.0)


@pytest.mark.parametrize(
    "n,expected", [(2, math.exp(math.sqrt(2))), (3, 2.0), (4, 1.622650042940699)]
)
def test_rbar_examples(n, expected):
    assert rbar(n, 1.0) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize(
    "n,expected",
    [
        (2, (math.exp(-2 * math.sqrt(2)), math.exp(2 * math.sqrt(2)))),
        (3, (0.0, 8.0)),
        (4, (0.0, 6.932652990377571)),
    ],
)
def test_alpha_pm_examples(n, expected):
    am, ap = alpha_pm(n)
    assert am == pytest.approx(expected[0], abs=1e-14)
    assert ap == pytest.approx(expected[1], rel=1e-13)


def test_alpha_pm_reported_values():
    am, ap = alpha_pm(2)
    assert round(am, 5) == 0.05911 and round(ap, 5) == 16.91883


@pytest.mark.parametrize("n", range(2, 12))
@pytest.mark.parametrize("R1", [0.3, 1.0, 4.0])
def test_rbar_consistent_with_alpha_plus(n, R1):
    assert rbar(n, R1) ** n == pytest.approx(alpha_pm(n)[1] * R1**n, rel=1e-12)
    assert alpha_pm(n)[0] < alpha_pm(n)[1]


# f'' values from symbolic differentiation (sympy), R1 = 1, t in (0.5, 2.0, 3.7)
SYMPY_F2 = {
    2: [1.3292806663273264, 0.1661600832909158, 0.05522151060943866],
    3: [0.8510582462406785, 0.05180228043453038, 0.011381228292061805],
    4: [2.3019008485079526, 0.09834916054316582, 0.017911141172392793],
    5: [3.70241896755127, 0.1283519829918007, 0.021317097179425953],
}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_f_second_matches_symbolic(n):
    for t, ref in zip((0.5, 2.0, 3.7), SYMPY_F2[n]):
        assert f_second(t, n, 1.0) == pytest.approx(ref, rel=1e-12)


def test_f_profile_vanishes_at_hole():
    assert f_profile(1.7**2, 2, 1.7) == pytest.approx(0.0, abs=1e-30)


def test_f_second_zero_at_window_edge_2d():
    assert abs(f_second(alpha_pm(2)[1], 2, 1.0)) < 1e-10


def test_f_second_negative_beyond_window_3d():
    t = 1.5 * alpha_pm(3)[1]
    h = 1e-5 * t
    fd = (f_profile(t + h, 3, 1.0) - 2 * f_profile(t, 3, 1.0) + f_profile(t - h, 3, 1.0)) / h**2
    assert f_second(t, 3, 1.0) < 0 and fd < 0


@pytest.mark.parametrize("fn", [f_profile, f_second])
def test_profile_rejects_nonpositive(fn):
    with pytest.raises(ValueError):
        fn(0.0, 2, 1.0)


def test_bounds_report_fields():
    rep = bounds_report(2, 1.0, 10.0, 3.0)
    assert rep.inside_rbar and rep.rbar == pytest.approx(math.exp(math.sqrt(2)))
    assert rep.alpha_minus < rep.alpha_plus
    assert not bounds_report(2, 1.0, 10.0, 5.0).inside_rbar
