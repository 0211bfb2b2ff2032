"""Right-hand sides: algebraic identities, conservation, and invariances."""

import numpy as np
import pytest

from wdlab import EquationSpec, MKind, PeriodicGrid, TwoComponentState
from wdlab.equations import (
    BFAMILY,
    CH_WEAK,
    NOVIKOV,
    momentum_of,
    recover_velocity,
    rhs_bfamily,
    rhs_ch_weakform,
    rhs_novikov,
    velocity_of_state,
)
from wdlab.timestepping import rk4_step
from wdlab.equations import make_rhs


def band_limited(grid, rng, kmax, amp=0.3):
    fh = np.zeros(grid.n // 2 + 1, dtype=complex)
    idx = np.arange(1, kmax + 1)
    fh[idx] = rng.standard_normal(kmax) + 1j * rng.standard_normal(kmax)
    f = np.fft.irfft(fh, n=grid.n)
    return amp * f / max(1.0, np.max(np.abs(f)))


def test_spec_validation():
    with pytest.raises(ValueError):
        EquationSpec(family="nope")
    with pytest.raises(ValueError):
        EquationSpec(kappa=2)
    with pytest.raises(ValueError):
        EquationSpec(lam=-0.1)
    s = EquationSpec(lam=0.5)
    assert s.with_lam(0.0).lam == 0.0
    assert s.with_lam(0.0).family == s.family


def test_recover_velocity_trivials():
    g = PeriodicGrid(64, L=1.0)
    c = np.full(g.n, 1.3)
    assert np.max(np.abs(recover_velocity(g, c, MKind.HELMHOLTZ) - 1.3)) <= 1e-13
    assert np.max(np.abs(recover_velocity(g, c, MKind.MU_HELMHOLTZ) - 1.3)) <= 1e-13
    m = (2 * np.pi / g.L) ** 2 * np.sin(2 * np.pi * g.x / g.L)
    v = recover_velocity(g, m, MKind.NEG_LAPLACIAN, gauge_mean=0.0)
    assert np.max(np.abs(v - np.sin(2 * np.pi * g.x / g.L))) <= 1e-12


def test_momentum_round_trips():
    rng = np.random.default_rng(21)
    g = PeriodicGrid(128)
    v = band_limited(g, rng, g.n // 4)
    for kind in (MKind.HELMHOLTZ, MKind.MU_HELMHOLTZ):
        back = recover_velocity(g, momentum_of(g, v, kind), kind)
        assert np.max(np.abs(back - v)) <= 1e-11
    back = recover_velocity(g, momentum_of(g, v - np.mean(v), MKind.NEG_LAPLACIAN),
                            MKind.NEG_LAPLACIAN, gauge_mean=0.0)
    assert np.max(np.abs(back - (v - np.mean(v)))) <= 1e-11


def test_rhs_bfamily_constant_data():
    g = PeriodicGrid(64)
    lam = 0.7
    spec = EquationSpec(BFAMILY, MKind.HELMHOLTZ, 2.0, 1, lam)
    st = TwoComponentState(np.full(g.n, 2.0), np.zeros(g.n))
    d = rhs_bfamily(g, st, spec)
    assert np.max(np.abs(d.m + lam * 2.0)) <= 1e-13
    assert np.max(np.abs(d.sigma)) == 0.0


def test_ch_momentum_mean_is_conserved():
    rng = np.random.default_rng(22)
    g = PeriodicGrid(128)
    v = band_limited(g, rng, g.n // 6)
    spec = EquationSpec(BFAMILY, MKind.HELMHOLTZ, 2.0, 1, 0.0)
    st = TwoComponentState(momentum_of(g, v, MKind.HELMHOLTZ), np.zeros(g.n))
    d = rhs_bfamily(g, st, spec)
    assert abs(g.mean(d.m)) <= 1e-10


@pytest.mark.parametrize("b", [0.0, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("kappa", [1, -1])
def test_neglaplacian_momentum_stays_mean_zero(b, kappa):
    rng = np.random.default_rng(23)
    g = PeriodicGrid(128)
    v = band_limited(g, rng, g.n // 6)
    v -= g.mean(v)
    sigma = band_limited(g, rng, g.n // 6)
    spec = EquationSpec(BFAMILY, MKind.NEG_LAPLACIAN, b, kappa, 0.0)
    st = TwoComponentState(momentum_of(g, v, MKind.NEG_LAPLACIAN), sigma)
    d = rhs_bfamily(g, st, spec)
    assert abs(g.mean(d.m)) <= 1e-10


def test_sigma_zero_is_invariant():
    rng = np.random.default_rng(24)
    g = PeriodicGrid(64)
    v = band_limited(g, rng, g.n // 6)
    spec = EquationSpec(BFAMILY, MKind.HELMHOLTZ, 3.0, -1, 0.4)
    st = TwoComponentState(momentum_of(g, v, MKind.HELMHOLTZ), np.zeros(g.n))
    d = rhs_bfamily(g, st, spec)
    assert np.max(np.abs(d.sigma)) == 0.0


@pytest.mark.parametrize("family", [BFAMILY, NOVIKOV, CH_WEAK])
def test_dissipation_enters_linearly(family):
    rng = np.random.default_rng(25)
    g = PeriodicGrid(64)
    lam = 0.8
    if family == CH_WEAK:
        v = band_limited(g, rng, g.n // 6)
        with_lam = rhs_ch_weakform(g, v, lam)
        without = rhs_ch_weakform(g, v, 0.0)
        assert np.array_equal(with_lam, without - lam * v)
        return
    v = band_limited(g, rng, g.n // 6)
    sigma = band_limited(g, rng, g.n // 6)
    if family == NOVIKOV:
        st = TwoComponentState(g.helmholtz(v))
        assert np.array_equal(rhs_novikov(g, st, lam).m,
                              rhs_novikov(g, st, 0.0).m - lam * st.m)
    else:
        spec = EquationSpec(BFAMILY, MKind.HELMHOLTZ, 2.0, 1, lam)
        st = TwoComponentState(momentum_of(g, v, MKind.HELMHOLTZ), sigma)
        d1 = rhs_bfamily(g, st, spec)
        d0 = rhs_bfamily(g, st, spec.with_lam(0.0))
        assert np.array_equal(d1.m, d0.m - lam * st.m)
        assert np.array_equal(d1.sigma, d0.sigma - lam * st.sigma)


def test_novikov_constant_data():
    g = PeriodicGrid(64)
    st = TwoComponentState(np.full(g.n, 1.5))
    d = rhs_novikov(g, st, 0.6)
    assert np.max(np.abs(d.m + 0.6 * 1.5)) <= 1e-13


def test_novikov_momentum_form_matches_expanded_equation():
    # On data band-limited to n/10 all cubic products stay below both the
    # dealiasing cutoff and the Nyquist mode, so the momentum form and the
    # literal expanded equation must agree to round-off scale.
    rng = np.random.default_rng(26)
    g = PeriodicGrid(256)
    lam = 0.3
    v = band_limited(g, rng, g.n // 10)
    n = g.helmholtz(v)
    ndot = rhs_novikov(g, TwoComponentState(n), lam).m
    vx = g.deriv(v, 1)
    vxx = g.deriv(v, 2)
    vxxx = g.deriv(v, 3)
    residual = ndot + 4 * v**2 * vx - 3 * v * vx * vxx - v**2 * vxxx + lam * n
    assert np.max(np.abs(residual)) <= 1e-9


def test_novikov_h1_energy_one_step():
    rng = np.random.default_rng(27)
    g = PeriodicGrid(128)
    v = band_limited(g, rng, g.n // 8)
    spec = EquationSpec(NOVIKOV, MKind.HELMHOLTZ, 2.0, 1, 0.0)
    f = make_rhs(g, spec)
    y0 = TwoComponentState(g.helmholtz(v)).stacked()
    y1 = rk4_step(f, y0, 1e-3)

    def h1(y):
        u = g.helmholtz_inverse(y[0])
        return g.mean(u**2 + g.deriv(u, 1) ** 2)

    assert abs(h1(y1) - h1(y0)) <= 1e-8 * h1(y0)


def test_ch_weakform_constant_data():
    g = PeriodicGrid(64)
    v = np.full(g.n, 2.2)
    assert np.max(np.abs(rhs_ch_weakform(g, v, 0.9) + 0.9 * 2.2)) <= 1e-13


def test_ch_weakform_matches_momentum_form():
    rng = np.random.default_rng(28)
    g = PeriodicGrid(256)
    for lam in (0.0, 0.5):
        v = band_limited(g, rng, g.n // 8)
        spec = EquationSpec(BFAMILY, MKind.HELMHOLTZ, 2.0, 1, lam)
        st = TwoComponentState(momentum_of(g, v, MKind.HELMHOLTZ), np.zeros(g.n))
        mdot = rhs_bfamily(g, st, spec).m
        vdot_weak = rhs_ch_weakform(g, v, lam)
        assert np.max(np.abs(g.helmholtz_inverse(mdot) - vdot_weak)) <= 1e-9


def test_ch_h1_energy_one_step():
    rng = np.random.default_rng(29)
    g = PeriodicGrid(128)
    v = band_limited(g, rng, g.n // 8)
    spec = EquationSpec(CH_WEAK, MKind.HELMHOLTZ, 2.0, 1, 0.0)
    f = make_rhs(g, spec)
    y0 = np.stack([v, np.zeros(g.n)])
    y1 = rk4_step(f, y0, 1e-3)

    def h1(y):
        return g.mean(y[0] ** 2 + g.deriv(y[0], 1) ** 2)

    assert abs(h1(y1) - h1(y0)) <= 1e-8 * h1(y0)


def test_velocity_of_state_dispatch():
    rng = np.random.default_rng(30)
    g = PeriodicGrid(64)
    v = band_limited(g, rng, g.n // 6)
    spec_w = EquationSpec(CH_WEAK, MKind.HELMHOLTZ)
    assert np.array_equal(velocity_of_state(g, TwoComponentState(v), spec_w), v)
    spec_n = EquationSpec(NOVIKOV, MKind.HELMHOLTZ)
    st = TwoComponentState(g.helmholtz(v))
    assert np.max(np.abs(velocity_of_state(g, st, spec_n) - v)) <= 1e-11
