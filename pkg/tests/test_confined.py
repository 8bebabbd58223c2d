import math
import warnings

import numpy as np
import pytest
from scipy.integrate import IntegrationWarning, quad

from nhqm.confined import (
    ClassificationWarning,
    Coupling,
    DomainError,
    Label,
    ParityError,
    PropagationFallback,
    assemble,
    basis_eval,
    classify,
    coupling_integral,
    evolve_confined,
    row_offdiagonal_sums,
    spectrum,
    sweep,
    wavefunction_eval,
)
from nhqm.integrate import rk4_adaptive, schrodinger_rhs
from nhqm.linalg import eig


def quad_inner(f, g, T):
    with warnings.catch_warnings():
        # orthogonal integrands are zero to roundoff, which quad reports
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(lambda x: f(x) * g(x), -T / 2, T / 2, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val / T


def match_conjugates(values):
    rest = list(np.conj(values))
    worst = 0.0
    for z in values:
        k = int(np.argmin([abs(z - w) for w in rest]))
        worst = max(worst, abs(z - rest.pop(k)))
    return worst


# --- basis ---------------------------------------------------------------


def test_basis_at_origin_and_walls():
    assert basis_eval(1, 12.0, 0.0) == 1.0
    for k in range(1, 11):
        assert basis_eval(k, 12.0, 6.0) == 0.0
        assert basis_eval(k, 12.0, -6.0) == 0.0


def test_basis_domain():
    with pytest.raises(DomainError):
        basis_eval(2, 4.0, 2.5)


@pytest.mark.parametrize("j", range(1, 7))
@pytest.mark.parametrize("k", range(1, 7))
def test_basis_orthogonality(j, k):
    T = 5.0
    val = quad_inner(lambda x: basis_eval(j, T, x), lambda x: basis_eval(k, T, x), T)
    assert val == pytest.approx(0.5 if j == k else 0.0, abs=1e-12)


# --- coupling integrals ---------------------------------------------------


@pytest.mark.parametrize("j,k", [(1, 2), (1, 4), (3, 2), (5, 2), (7, 10), (9, 2), (1, 20)])
@pytest.mark.parametrize("T", [4.63, 12.0])
def test_coupling_closed_form_against_quadrature(j, k, T):
    ref = quad_inner(lambda x: x * basis_eval(j, T, x), lambda x: basis_eval(k, T, x), T)
    assert coupling_integral(j, k, T) == pytest.approx(ref, abs=1e-10)
    assert coupling_integral(k, j, T) == coupling_integral(j, k, T)


def test_coupling_scales_linearly_in_T():
    ratios = [coupling_integral(1, 2, T) / T for T in (4.0, 8.0, 12.0)]
    assert ratios[0] == pytest.approx(ratios[1], rel=1e-14) == pytest.approx(ratios[2], rel=1e-14)


def test_coupling_decay_in_k():
    ks = np.arange(2, 22, 2)
    c = np.array([abs(coupling_integral(1, k, 12.0)) for k in ks])
    # the two 1/k^2 terms carry opposite signs for j = 1, leaving |c| k^3 -> 4 T / pi^2
    scaled = c * (ks**2 - 1) ** 2 / ks
    np.testing.assert_allclose(scaled, 4 * 12.0 / math.pi**2, rtol=1e-12)
    assert np.all(np.diff(c) < 0)


def test_coupling_same_parity_raises():
    with pytest.raises(ParityError):
        coupling_integral(1, 3, 12.0)
    with pytest.raises(ParityError):
        coupling_integral(2, 4, 12.0)


# --- assembly -------------------------------------------------------------


def test_zero_mu_is_box_spectrum():
    model = assemble(7.0, 0.0, 5)
    expected = (np.arange(1, 11) * math.pi / 7.0) ** 2
    np.testing.assert_allclose(eig(model.matrix).eigenvalues, expected, rtol=1e-14)


def test_diagonal_entries():
    model = assemble(12.0, 1.0, 40)
    np.testing.assert_allclose(model.diagonal, (np.arange(1, 81) * math.pi) ** 2 / 144, rtol=1e-15)


@pytest.mark.parametrize("coupling", list(Coupling))
def test_structure(coupling):
    model = assemble(9.0, 1.3, 6, coupling)
    h = model.matrix
    np.testing.assert_array_equal(h, h.T)
    D = np.diag(model.diagonal)
    C = model.coupling_matrix
    np.testing.assert_allclose(h, D + 1j * 1.3 * C, atol=1e-15)
    np.testing.assert_array_equal(C, C.T)
    k = np.arange(1, 13)
    same_parity = (k[:, None] % 2) == (k[None, :] % 2)
    assert np.all(C[same_parity] == 0)
    if coupling is Coupling.NEAREST:
        far = np.abs(k[:, None] - k[None, :]) > 1
        assert np.all(C[far] == 0)


def test_entries_include_overlap_factor():
    h = assemble(12.0, 1.0, 3).matrix
    assert h[0, 1] == pytest.approx(2j * coupling_integral(1, 2, 12.0))


def test_couplings_give_different_spectra():
    full = spectrum(assemble(12.0, 1.0, 10, Coupling.FULL)).values
    near = spectrum(assemble(12.0, 1.0, 10, Coupling.NEAREST)).values
    assert np.max(np.abs(full - near)) > 1e-2


@pytest.mark.parametrize("T,mu,N", [(12, 1, 40), (4.63, 1, 40), (4.6182, 1, 40), (6, 1, 2), (13, 1, 40), (12, 1.5, 40), (3, 2, 7)])
def test_conjugation_closure(T, mu, N):
    w = eig(assemble(T, mu, N).matrix).eigenvalues
    assert match_conjugates(w) <= 1e-9


# --- classification -------------------------------------------------------


def test_classify_labels_and_partners():
    vals = np.array([1 - 2j, 1 + 2j, 3 + 1e-14j, 4])
    spec = classify(vals, [1, 2, 3, 4], tol_im=1e-9, window=1e-6)
    assert [s.label for s in spec] == [Label.PAIR, Label.PAIR, Label.REAL, Label.REAL]
    assert spec[0].partner == 1 and spec[1].partner == 0
    assert spec.pair_count() == 1
    assert spec[2].diagonal_deviation == pytest.approx(1e-14j)


def test_classify_warns_on_unpaired():
    with pytest.warns(ClassificationWarning):
        spec = classify(np.array([1 + 1j, 5.0]), [1, 2], tol_im=1e-9, window=1e-6)
    assert spec[0].label is Label.UNPAIRED


def test_table1_pattern_three_pairs():
    spec = spectrum(assemble(12, 1, 40))
    assert spec.pair_count(10) == 3
    assert [s.label for s in spec.states[:10]] == [Label.PAIR] * 6 + [Label.REAL] * 4


def test_lowest_pair_near_transition():
    spec = spectrum(assemble(4.63, 1, 40))
    assert spec[0].label is Label.PAIR
    assert abs(spec[0].value.imag) == pytest.approx(0.0886971, abs=1e-6)


def test_real_states_after_transition():
    spec = spectrum(assemble(4.6182, 1, 40))
    assert spec.pair_count() == 0
    assert all(abs(s.value.imag) < 1e-9 for s in spec.states[:2])


def test_diagonal_dominance_tail():
    model = assemble(12, 1, 40)
    spec = spectrum(model)
    h = model.diagonal
    top = range(len(spec) - 5, len(spec))
    for n in top:
        assert abs(spec[n].diagonal_deviation) / h[n] < 0.01
    tail_re = spec.values.real[-20:]
    assert np.all(np.diff(tail_re) > 0)


def test_row_sums_reported():
    model = assemble(12, 1, 10)
    sums = row_offdiagonal_sums(model)
    assert sums.shape == (20,)
    assert np.all(sums > 0)


def test_convergence_in_N():
    s20 = spectrum(assemble(12, 1, 20))[0].value.real
    s40 = spectrum(assemble(12, 1, 40))[0].value.real
    assert abs(s20 - s40) < 1e-6


# --- sweep ----------------------------------------------------------------


def test_sweep_pair_counts_in_T():
    res = sweep([12, 13], [1], [40])
    assert [r.pair_count(10) for r in res] == [3, 4]


def test_sweep_single_point_matches_spectrum():
    res = sweep([6], [1], [20])
    assert len(res) == 1
    np.testing.assert_array_equal(res.records[0].spectrum.values, spectrum(assemble(6, 1, 20)).values)


def test_sweep_N_moves_state_three():
    res = sweep([6], [1], [2, 20])
    vals = [r.spectrum[2].value.real for r in res]
    assert vals[0] == pytest.approx(2.44324110, abs=5e-8)
    assert vals[1] == pytest.approx(2.25704001, abs=5e-8)


def test_sweep_records_failures():
    res = sweep([-1.0, 2.0], [1], [3])
    assert res.records[0].spectrum is None and "T must be positive" in res.records[0].error
    assert res.records[1].spectrum is not None


def test_sweep_rejects_non_monotone_grid():
    with pytest.raises(ValueError):
        sweep([12, 6, 13], [1], [10])


def test_pair_count_monotone_in_T():
    counts = [r.pair_count(10) for r in sweep([4.6182, 4.63, 6, 12, 13], [1], [40])]
    assert counts == sorted(counts)


# --- dynamics -------------------------------------------------------------


def test_evolve_confined_identity():
    model = assemble(12, 1, 10)
    c0 = np.random.default_rng(0).normal(size=20) + 0j
    np.testing.assert_array_equal(evolve_confined(model, c0, 0.0), c0)


def test_stationary_real_state():
    model = assemble(12, 1, 10)
    dec = eig(model.matrix)
    spec = spectrum(model)
    k = next(i for i, s in enumerate(spec.states) if s.label is Label.REAL)
    v = dec.eigenvectors[:, k]
    for t in (0.5, 2.0, 5.0):
        np.testing.assert_allclose(np.abs(evolve_confined(model, v, t)), np.abs(v), atol=1e-9)


def test_evolve_confined_against_rk4():
    model = assemble(12, 1, 10)
    rng = np.random.default_rng(42)
    c0 = rng.normal(size=20) + 1j * rng.normal(size=20)
    got = evolve_confined(model, c0, 1.0)
    ref = rk4_adaptive(schrodinger_rhs(model.matrix), c0, 0.0, 1.0, rtol=1e-12, atol=1e-15)
    assert np.linalg.norm(got - ref) / np.linalg.norm(ref) < 1e-7


def test_evolve_confined_fallback(monkeypatch):
    import nhqm.confined as mod

    monkeypatch.setattr(mod, "EXPANSION_COND_LIMIT", 1.0)
    model = assemble(12, 1, 4)
    c0 = np.ones(8, dtype=complex)
    with pytest.warns(PropagationFallback):
        got = evolve_confined(model, c0, 0.7)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        monkeypatch.setattr(mod, "EXPANSION_COND_LIMIT", 1e8)
        ref = evolve_confined(model, c0, 0.7)
    assert np.linalg.norm(got - ref) / np.linalg.norm(ref) < 1e-8


# --- wavefunction ---------------------------------------------------------


def test_wavefunction_walls_and_origin():
    model = assemble(12, 1, 10)
    c = np.random.default_rng(3).normal(size=20) + 1j
    assert wavefunction_eval(model, c, 6.0) == 0
    assert wavefunction_eval(model, c, -6.0) == 0
    e1 = np.zeros(20)
    e1[0] = 1
    assert wavefunction_eval(model, e1, 0.0) == 1


def test_wavefunction_domain():
    with pytest.raises(DomainError):
        wavefunction_eval(assemble(4, 1, 2), np.ones(4), 2.1)


def test_ground_state_density_norm():
    model = assemble(12, 1, 10)
    v = eig(model.matrix).eigenvectors[:, 0]
    density, _ = quad(lambda x: abs(wavefunction_eval(model, v, x)) ** 2, -6, 6, limit=400, epsabs=1e-13)
    assert density / 12 == pytest.approx(0.5 * np.vdot(v, v).real, rel=1e-10)
