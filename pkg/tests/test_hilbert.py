import io
import logging

import numpy as np
import pytest

from conftest import random_digraph
from graphphase import (
    DefectiveError,
    DiGraph,
    InvalidArgumentError,
    PreconditionError,
    amplitude,
    analytic,
    build_ght,
    classical_hilbert_dft,
    decompose,
    gen_cycle,
    gen_path,
    ght,
    instantaneous_frequency,
    perturb,
    phase,
    verify_overlap_identities,
)
from graphphase.hilbert import (
    ANALYSIS_HEADER,
    analytic_spectral,
    dump_analysis,
    dump_frequency,
    hilbert_filter,
    wrap_phase,
)


@pytest.fixture(scope="module")
def random_operator():
    rng = np.random.default_rng(42)
    res = perturb(random_digraph(rng, 25, 0.15))
    return build_ght(res.decomposition), res.perturbed.adjacency


def test_filter_case_table():
    np.testing.assert_array_equal(hilbert_filter(np.array([2, 1j, -1j])), [0, -1j, 1j])


def test_filter_all_real_is_zero_operator():
    op = build_ght(decompose(DiGraph(np.diag([1.0, 2.0, 3.0]))))
    assert np.all(op.filter_diag == 0)
    assert np.all(ght(op, np.array([1.0, -2.0, 5.0])) == 0)


def test_filter_on_cycle4():
    op = build_ght(decompose(gen_cycle(4)))
    lam = op.decomposition.eigenvalues
    for l, h in zip(lam, op.filter_diag):
        if abs(l.imag) < 1e-12:
            assert h == 0
        else:
            assert h == (-1j if l.imag > 0 else 1j)


def test_build_requires_valid_decomposition():
    with pytest.raises(DefectiveError, match="perturb"):
        build_ght(decompose(gen_path(3)))


def test_constant_signal_has_zero_transform():
    op = build_ght(decompose(gen_cycle(9)))
    np.testing.assert_allclose(ght(op, np.full(9, 2.5)), 0, atol=1e-14)


def test_cosine_on_cycle8():
    k = np.arange(8)
    op = build_ght(decompose(gen_cycle(8)))
    a = analytic(op, np.cos(2 * np.pi * k / 8))
    # DFT oracle: classical H(cos) = sin; the edge orientation flips the sign
    np.testing.assert_allclose(np.abs(a.hilbert), np.abs(np.sin(2 * np.pi * k / 8)), atol=1e-12)
    np.testing.assert_allclose(a.hilbert, -classical_hilbert_dft(np.cos(2 * np.pi * k / 8)), atol=1e-12)
    np.testing.assert_allclose(amplitude(a), 1.0, atol=1e-12)


@pytest.mark.parametrize("n", [4, 8, 16, 33])
def test_cycle_equals_classical_against_edges(n):
    rng = np.random.default_rng(n)
    op = build_ght(decompose(gen_cycle(n)))
    rev = lambda v: np.roll(v[::-1], 1)  # noqa: E731
    for _ in range(5):
        x = rng.standard_normal(n)
        np.testing.assert_allclose(ght(op, x), rev(classical_hilbert_dft(rev(x))), atol=1e-9)


def test_analytic_routes_agree(random_operator):
    op, _ = random_operator
    rng = np.random.default_rng(1)
    for _ in range(5):
        x = rng.standard_normal(op.n)
        a = analytic(op, x)
        np.testing.assert_allclose(a.values, analytic_spectral(op, x), atol=1e-9)
        np.testing.assert_array_equal(a.values.real, x)


def test_real_spectrum_analytic_is_input():
    op = build_ght(decompose(DiGraph(np.diag([1.0, -2.0]))))
    a = analytic(op, np.array([3.0, 4.0]))
    np.testing.assert_array_equal(a.values, [3.0, 4.0])


def test_amplitude_phase_examples():
    z = np.array([3 + 4j, -1 + 0j, 0j, -1 - 0j])
    np.testing.assert_allclose(amplitude(z), [5, 1, 0, 1])
    phi = phase(z)
    assert phi[0] == pytest.approx(0.9272952180016122)
    assert phi[1] == np.pi
    assert phi[2] == 0.0
    assert phi[3] == np.pi


def test_instantaneous_frequency_examples():
    np.testing.assert_allclose(instantaneous_frequency([0.1, 0.4], [0, 1]), [-0.3])
    np.testing.assert_allclose(instantaneous_frequency([3.0, -3.0], [0, 1]), [6.0 - 2 * np.pi])


def test_instantaneous_frequency_lengths_and_errors():
    phi = np.linspace(0, 1, 5)
    assert len(instantaneous_frequency(phi, [0, 1, 2, 3, 4])) == 4
    assert len(instantaneous_frequency(phi, [0, 1, 2, 3, 4], closed=True)) == 5
    with pytest.raises(InvalidArgumentError):
        instantaneous_frequency(phi, [0])
    with pytest.raises(InvalidArgumentError, match="not an edge"):
        instantaneous_frequency(phi, [0, 2], graph=gen_cycle(5))


def test_wrap_interval():
    w = wrap_phase(np.array([np.pi, -np.pi, 3 * np.pi, 0.5, -7.0]))
    assert np.all(w > -np.pi) and np.all(w <= np.pi)
    np.testing.assert_allclose(w[:3], np.pi)


def test_forward_wave_on_cycle_has_positive_steps():
    k = np.arange(16)
    op = build_ght(decompose(gen_cycle(16)))
    a = analytic(op, np.cos(2 * np.pi * 3 * k / 16))
    omega = instantaneous_frequency(a.phase, list(range(16)), closed=True)
    np.testing.assert_allclose(omega, 2 * np.pi * 3 / 16, atol=1e-12)


def test_classical_dft_examples():
    k = np.arange(8)
    np.testing.assert_allclose(classical_hilbert_dft(np.cos(2 * np.pi * k / 8)), np.sin(2 * np.pi * k / 8), atol=1e-15)
    np.testing.assert_allclose(classical_hilbert_dft(np.full(6, 3.0)), 0, atol=1e-15)
    np.testing.assert_allclose(classical_hilbert_dft([1, 0, 0, 0]), [0, 0.5, 0, -0.5], atol=1e-15)
    with pytest.raises(InvalidArgumentError):
        classical_hilbert_dft([1.0])


def test_realness_involution_shift_linearity(random_operator):
    op, A = random_operator
    rng = np.random.default_rng(2)
    for _ in range(5):
        x, y = rng.standard_normal((2, op.n))
        hx, resid = op.apply(x)
        assert resid <= 1e-10 * np.linalg.norm(x)
        np.testing.assert_allclose(ght(op, hx), -(x - op.real_projection(x)), atol=1e-9)
        np.testing.assert_allclose(ght(op, A @ x), A @ hx, atol=1e-9)
        np.testing.assert_allclose(ght(op, 2 * x - 3 * y), 2 * hx - 3 * ght(op, y), atol=1e-10)


def test_matrix_matches_apply(random_operator):
    op, _ = random_operator
    x = np.random.default_rng(3).standard_normal(op.n)
    np.testing.assert_allclose(op.matrix() @ x, ght(op, x), atol=1e-10)


def test_rejects_complex_and_wrong_length():
    op = build_ght(decompose(gen_cycle(4)))
    with pytest.raises(InvalidArgumentError):
        ght(op, np.ones(4, dtype=complex))
    with pytest.raises(InvalidArgumentError):
        ght(op, np.ones(5))


def test_large_residue_is_logged(caplog, monkeypatch):
    op = build_ght(decompose(gen_cycle(4)))
    monkeypatch.setattr(type(op), "apply", lambda self, x: (np.zeros(4), 1.0))
    with caplog.at_level(logging.WARNING, logger="graphphase.hilbert"):
        ght(op, np.ones(4))
    assert "residue" in caplog.text


def test_overlap_single_component(random_operator):
    op, _ = random_operator
    x = np.random.default_rng(4).standard_normal(op.n)
    rep = verify_overlap_identities(op, [x], [range(op.n)])
    assert rep.amplitude_violation <= 1e-12 and rep.phase_violation == 0.0


def test_overlap_single_support_node_reverts(random_operator):
    op, _ = random_operator
    rng = np.random.default_rng(5)
    x1 = np.zeros(op.n)
    x2 = np.zeros(op.n)
    x1[:10] = rng.standard_normal(10)
    x2[8:] = rng.standard_normal(op.n - 8)
    rep = verify_overlap_identities(op, [x1, x2], [range(10), range(8, op.n)])
    assert rep.max_violation <= 1e-9


def test_overlap_support_violation(random_operator):
    op, _ = random_operator
    with pytest.raises(PreconditionError):
        verify_overlap_identities(op, [np.ones(op.n)], [[0, 1]])


def test_csv_dumps():
    op = build_ght(decompose(gen_cycle(4)))
    a = analytic(op, np.array([1.0, 0.0, -1.0, 0.0]))
    lines = dump_analysis(a).splitlines()
    assert lines[0] == ANALYSIS_HEADER and len(lines) == 5
    assert lines[1].split(",")[:2] == ["0", "1.0"]
    freq = dump_frequency([0, 1, 2], np.array([0.5, 0.25]))
    assert freq.splitlines() == ["from_node,to_node,omega", "0,1,0.5", "1,2,0.25"]
    closed = dump_frequency([0, 1], np.array([0.5, 0.5]), closed=True)
    assert closed.splitlines()[-1] == "1,0,0.5"
    with pytest.raises(InvalidArgumentError):
        dump_frequency([0, 1, 2], np.array([0.5]))
