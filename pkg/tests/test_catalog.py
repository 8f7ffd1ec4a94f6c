import dataclasses
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import sym_oracle as so
from rdsim import catalog
from rdsim.catalog import DegenerateParameterError, ParamConstraintViolation
from rdsim.reduction import default_xt_samples

NAMES = [i.name for i in catalog.list_systems()]
CONSERVING = {"FP-GAUSS", "NFP-GAUSS", "NFP-EXP", "NFP-QUAD", "NL-DIFF"}


def test_catalog_has_the_ten_systems():
    assert NAMES == ["FP-GAUSS", "NFP-GAUSS", "NFP-EXP", "NFP-QUAD", "NL-DIFF",
                     "GR-GAUSS", "GR-HALF", "GR-Q1", "GR-Q2", "FISHER-N"]


def test_descriptors_mark_derived_and_forced_exponents():
    nl = catalog.get_info("NL-DIFF").to_dict()
    assert "derived" in nl["derived"]["alpha"] and "1/(n+2)" in nl["derived"]["alpha"]
    fisher = catalog.get_info("FISHER-N").to_dict()
    assert "forced" in fisher["derived"]["alpha"]
    assert catalog.get_info("GR-Q1").warnings


@pytest.mark.parametrize("name", NAMES)
def test_family_matches_exponents(name):
    s = catalog.default_system(name)
    assert s.conserving == (name in CONSERVING)
    assert (s.tau is not None) == s.conserving
    assert catalog.get_info(name).family == ("conserving" if s.conserving else "non-conserving")


@pytest.mark.parametrize("name", NAMES)
def test_fields_match_independent_transcription(name):
    s = catalog.default_system(name)
    fns = so.field_fns(name, dict(s.params))
    for x, t in default_xt_samples(s, n=40, seed=7):
        for ref_fn, got_fn in zip(fns, (s.D_field, s.f_field, s.W_field)):
            ref = float(so.evaluate(ref_fn, x, t))
            assert got_fn(x, t) == pytest.approx(ref, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("name", NAMES)
def test_transcription_solves_the_pde_symbolically(name):
    s = catalog.default_system(name)
    res = so.pde_residual_fn(name, dict(s.params))
    for x, t in default_xt_samples(s, n=20, seed=2):
        assert abs(so.evaluate(res, x, t)) < 1e-35


@pytest.mark.parametrize("name", NAMES)
def test_consistency_triangle(name):
    s = catalog.default_system(name)
    e = s.exponents
    rng = np.random.default_rng(11)
    lo, hi = s.pde_z_range or s.z_range
    for _ in range(200):
        t = rng.uniform(0.5, 5.0) if name != "FISHER-N" else rng.uniform(0.05, 0.2)
        z = rng.uniform(lo, hi)
        if s.z_support is not None:
            z *= 0.99 * s.z_support / max(abs(lo), abs(hi))
        x = z * t ** e.alpha
        assert s.W_field(x, t) == pytest.approx(t ** e.mu * s.y(z), rel=1e-12, abs=1e-300)
        if s.diffusion_w is None:
            assert s.D_field(x, t) == pytest.approx(t ** e.nu * s.rho(z), rel=1e-12, abs=1e-300)
        if s.reaction_w is None:
            assert s.f_field(x, t) == pytest.approx(t ** e.lam * s.sigma(z), rel=1e-12, abs=1e-300)


# -- named examples ---------------------------------------------------------------

def test_fp_gauss_heat_kernel_and_peak():
    s = catalog.fp_gaussian_drift(0.5, 0.0, 0.0)
    x = np.linspace(-5, 5, 21)
    for t in (1.0, 2.5):
        np.testing.assert_allclose(s.W_field(x, t), np.exp(-x ** 2 / (4 * t)) / np.sqrt(4 * np.pi * t),
                                   rtol=1e-14)
    s = catalog.fp_gaussian_drift(1.0, 1.0, 0.5)
    for t in (1.0, 2.0):
        peak = 1.0 * t / (1.0 - 0.5)
        assert s.W_field(peak, t) > s.W_field(peak + 1e-3, t)
        assert s.W_field(peak, t) > s.W_field(peak - 1e-3, t)
    with pytest.raises(ParamConstraintViolation):
        catalog.fp_gaussian_drift(0.5, 0.0, 0.5)


def test_nfp_gauss_examples():
    s = catalog.build("NFP-GAUSS", {"alpha": 0.6, "gamma": 2, "eta": 0.1, "C": 1})
    assert s.W_field(0.0, 1.0) == pytest.approx(11.0, rel=1e-15)
    g0 = catalog.nonfp_gaussian_pair(0.6, 0.0, 0.1, 1.0)
    xs = np.linspace(-4, 4, 9)
    assert np.all(g0.f_field(xs, 1.7) == 0)
    np.testing.assert_allclose(g0.y(xs), np.exp(-0.3 * xs ** 2), rtol=1e-15)
    with pytest.raises(ParamConstraintViolation) as info:
        catalog.nonfp_gaussian_pair(0.6, 2.0, 0.5, 0.0)
    assert info.value.param == "C"
    catalog.nonfp_gaussian_pair(0.6, 2.0, 0.5, 10.0)
    with pytest.raises(DegenerateParameterError):
        catalog.nonfp_gaussian_pair(0.6, 2.0, 0.3, 1.0)


def _nfp_exp_bound_ok(alpha, eta, C):
    return C >= (-1 if alpha > eta else 1) / abs(alpha - eta)


@settings(max_examples=150, deadline=None)
@given(st.floats(0.05, 5), st.floats(0.05, 5), st.floats(-30, 30))
def test_nfp_exp_constraint_iff_bound(alpha, eta, C):
    assume(abs(alpha - eta) > 1e-3)
    ok = _nfp_exp_bound_ok(alpha, eta, C)
    try:
        s = catalog.nonfp_exponential_pair(alpha, eta, C)
    except ParamConstraintViolation:
        assert not ok
    else:
        assert ok
        z = np.linspace(0, 40, 400)
        assert np.all(s.y(z) >= -1e-15 * abs(C))


def test_nfp_exp_examples():
    s = catalog.build("NFP-EXP", {"alpha": 2, "eta": 1, "C": 1})
    assert s.y(0.0) == pytest.approx(2.0, rel=1e-15)
    assert s.y(200.0) < 1e-80
    with pytest.raises(DegenerateParameterError):
        catalog.nonfp_exponential_pair(1.0, 1.0, 1.0)


def test_nfp_quad_examples():
    s = catalog.nonfp_quadratic_rho(1.3, 0.7)
    for t in (1.0, 2.0, 5.0):
        assert s.W_field(0.0, t) == pytest.approx(t ** -1.3, rel=1e-15)
    assert s.D_field(2.0, 4.0) == pytest.approx(1.3 * 4.0 / 4.0, rel=1e-15)
    for bad in ((0.0, 1.0), (1.0, -1.0)):
        with pytest.raises(ParamConstraintViolation):
            catalog.nonfp_quadratic_rho(*bad)


def test_nl_diff_examples():
    s = catalog.nonlinear_diffusion(1, 1.0)
    assert s.alpha == pytest.approx(1 / 3) and s.mu == -s.alpha
    assert s.W_field(0.0, 1.0) == pytest.approx(1.0)
    assert s.support(1.0) == pytest.approx(math.sqrt(6), rel=1e-14)
    edge = s.support(1.7)
    assert s.W_field(edge, 1.7) == pytest.approx(0.0, abs=1e-7)
    assert s.W_field(edge * 1.01, 1.7) == 0.0
    # continuity across the front
    for n in (1, 2, 3):
        sn = catalog.nonlinear_diffusion(n, 2.0)
        e = sn.support(2.0)
        assert sn.W_field(e * (1 - 1e-10), 2.0) < 1e-3
    with pytest.raises(DegenerateParameterError, match="FP-GAUSS"):
        catalog.nonlinear_diffusion(0, 1.0)
    with pytest.raises(ParamConstraintViolation):
        catalog.nonlinear_diffusion(1, 0.0)
    with pytest.raises(ParamConstraintViolation):
        catalog.nonlinear_diffusion(1.5, 1.0)


def test_growth_examples():
    s = catalog.build("GR-GAUSS", {"alpha": 1, "mu": 0.5, "c": 1})
    for t in (1.0, 2.0, 3.0):
        assert s.W_field(0.0, t) == pytest.approx(t ** 0.5, rel=1e-15)
    pure = catalog.growth_gaussian(0.8, 0.3, 0.8)
    z = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(pure.sigma(z), (0.3 + 0.8) * pure.y(z), rtol=1e-14)
    with pytest.raises(ParamConstraintViolation):
        catalog.growth_gaussian(1.0, 0.5, 0.0)
    with pytest.raises(ParamConstraintViolation):
        catalog.growth_gaussian(1.0, -1.0, 1.0)
    with pytest.raises(ParamConstraintViolation):
        catalog.growth_halfline(1.0, 0.5, 0.0, 1.0)
    with pytest.raises(ParamConstraintViolation):
        catalog.growth_halfline(1.0, 0.5, 1.0, -1.0)


def test_growth_halfline_boundary_flux_vanishes():
    s = catalog.default_system("GR-HALF")
    assert s.rho(0.0) * s.y.derivative(0.0) == 0.0
    assert abs(s.rho(60.0) * s.y.derivative(60.0)) < 1e-20


@pytest.mark.parametrize("variant, g, dg", [("g=-1", lambda z: -1.0, lambda z: 0.0),
                                            ("g=-z", lambda z: -z, lambda z: -1.0)])
def test_growth_quadratic(variant, g, dg):
    s = catalog.growth_quadratic(1.0, 0.5, variant)
    assert catalog.NEGATIVE_DIFFUSION_WARNING in s.warnings
    assert s.D_field(2.0, 1.0) < 0
    for z in np.linspace(0.1, 6, 12):
        y2 = s.y.derivative(z, 2)
        assert abs(y2 - (g(z) ** 2 + dg(z)) * s.y(z)) < 1e-12
    with pytest.raises(DegenerateParameterError):
        catalog.growth_quadratic(0.0, 0.5, variant)
    assert not catalog.growth_quadratic(-1.0, 0.5, variant).warnings


def test_growth_quadratic_reaction_closed_forms():
    q1 = catalog.growth_quadratic(1.0, 0.5, "g=-1")
    q2 = catalog.growth_quadratic(1.0, 0.5, "g=-z")
    for x, t in ((0.3, 1.0), (2.0, 1.5), (4.0, 2.5)):
        z = x / t
        assert q1.f_field(x, t) == pytest.approx(t ** -0.5 * (0.5 * z * z + 0.5) * math.exp(-z), rel=1e-13)
        assert q2.f_field(x, t) == pytest.approx(
            t ** -0.5 * (0.5 * z * z * (z * z - 1) + 0.5) * math.exp(-z * z / 2), rel=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fisher_constants(n):
    h = math.sqrt(n / 2 + 1)
    gamma, b = catalog.fisher_constants(n)
    assert gamma == pytest.approx(h + 1 / h, abs=1e-12)
    assert b == pytest.approx(h - 1 / h, abs=1e-12)


def test_fisher_n3_values_and_profile():
    gamma, b = catalog.fisher_constants(3)
    assert gamma == pytest.approx(2.213594, abs=1e-6)
    assert b == pytest.approx(0.948683, abs=1e-6)
    s = catalog.default_system("FISHER-N")
    assert s.alpha == 0
    assert s.y(-60.0) == pytest.approx(1.0, abs=1e-20)
    assert s.y(60.0) < 1e-15
    xs = np.linspace(-20, 20, 2001)
    assert np.all(np.diff(s.y(xs)) < 0)
    with pytest.raises(ParamConstraintViolation):
        catalog.fisher_scaling(3, -1, 1, 0.0)
    with pytest.raises(ParamConstraintViolation):
        catalog.fisher_scaling(3, 0.0, 1, 1.0)
    with pytest.raises(DegenerateParameterError):
        catalog.fisher_scaling(3, -1, 0.0, 1.0)


def test_fisher_mirror_branch():
    plus = catalog.fisher_scaling(2, -1, 1, 1, "+")
    minus = catalog.fisher_scaling(2, -1, 1, 1, "-")
    for x in (-3.0, 0.5, 2.0):
        assert minus.y(x) == pytest.approx(plus.y(-x), rel=1e-14)


# -- positivity -----------------------------------------------------------------

_STRATEGIES = {
    "FP-GAUSS": dict(alpha=st.floats(0.1, 3), beta0=st.floats(-2, 2), beta1=st.floats(-2, 2)),
    "NFP-GAUSS": dict(alpha=st.floats(0.1, 3), gamma=st.floats(0, 3), eta=st.floats(0.05, 2),
                      C=st.floats(-20, 20)),
    "NFP-EXP": dict(alpha=st.floats(0.1, 3), eta=st.floats(0.1, 3), C=st.floats(-20, 20)),
    "NFP-QUAD": dict(alpha=st.floats(0.1, 3), beta=st.floats(0.1, 3)),
    "NL-DIFF": dict(n=st.integers(1, 4), C=st.floats(0.1, 5)),
    "GR-GAUSS": dict(alpha=st.floats(-2, 2), mu=st.floats(-2, 2), c=st.floats(0.1, 3)),
    "GR-HALF": dict(alpha=st.floats(-2, 2), mu=st.floats(-2, 2), beta=st.floats(0.1, 3),
                    c=st.floats(0.1, 3)),
    "GR-Q1": dict(alpha=st.floats(-2, 2), mu=st.floats(-2, 2)),
    "GR-Q2": dict(alpha=st.floats(-2, 2), mu=st.floats(-2, 2)),
    "FISHER-N": dict(n=st.floats(0.5, 5), mu=st.floats(-2, 2), beta=st.floats(-2, 2),
                     C=st.floats(0.1, 5)),
}


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_accepted_parameters_give_nonnegative_density(name, data):
    params = {k: data.draw(v, label=k) for k, v in _STRATEGIES[name].items()}
    try:
        s = catalog.build(name, params)
    except ParamConstraintViolation:
        assume(False)
    lo, hi = s.domain.bounds
    xs = np.linspace(max(lo, -15), min(hi, 15), 301)
    for t in (0.5, 1.0, 2.0):
        w = np.asarray(s.W_field(xs, t), dtype=float)
        assert np.all(w >= -1e-12 * max(1.0, np.max(np.abs(w))))


# -- registry plumbing ----------------------------------------------------------

def test_parse_and_format_params_round_trip():
    items = ["alpha=0.6", "gamma=2", "eta=0.1", "C=1"]
    p = catalog.parse_params(items)
    assert p == {"alpha": 0.6, "gamma": 2.0, "eta": 0.1, "C": 1.0}
    assert catalog.parse_params(catalog.format_params(p)) == p
    assert catalog.parse_params(["sign=-"]) == {"sign": "-"}
    for bad in (["alpha"], ["nope=1"], ["alpha=x"]):
        with pytest.raises(ValueError):
            catalog.parse_params(bad)


def test_build_rejects_foreign_parameters_and_unknown_names():
    with pytest.raises(ValueError, match="does not take"):
        catalog.build("GR-GAUSS", {"eta": 1.0})
    with pytest.raises(KeyError):
        catalog.build("NOPE")


def test_systems_are_immutable():
    s = catalog.default_system("GR-GAUSS")
    with pytest.raises(dataclasses.FrozenInstanceError):
        s.name = "other"
