import math

import numpy as np
import pytest

from common import DomainError, IntegrationError, Tolerancias
from essential import (
    J4,
    assemble_B,
    closed_form_spectrum_e0,
    monodromy,
    monodromy_e0_exact,
    monodromy_iterate,
    quadruple_mismatch,
    spectrum_distance,
    symplectic_residual,
)
from model import make_params

# pontos com crescimento moderado de ‖M‖ (ℛ1 a ℛ4)
PONTOS_E0 = [
    (0.5, 0.48),   # ℛ2
    (0.3, 0.1),    # ℛ1
    (0.9, 0.68),   # ℛ3
    (2.0, 0.95),   # ℛ4
    (0.8, 0.62),   # ℛ3
]


def test_B_simetrica_e_periodica():
    p = make_params(1.5, 0.7, 0.4)
    B = assemble_B(p, 0.3)
    assert np.allclose(B, B.T)
    assert np.allclose(assemble_B(p, 0.3 + 2 * math.pi), B)
    assert B[2, 2] == pytest.approx(1.0 - p.lambda3 / (1.0 + 0.4 * math.cos(0.3)))


@pytest.mark.parametrize("alpha, beta", PONTOS_E0)
def test_espectro_e0_integrado_contra_forma_fechada(alpha, beta):
    r = monodromy(make_params(alpha, beta, 0.0))
    assert spectrum_distance(r.spectrum, closed_form_spectrum_e0(alpha, beta)) < 1e-8
    assert r.symplectic_residual < 1e-9


def test_espectro_exato_menos_um():
    # (¾, √3/3): todos os multiplicadores em −1
    r = monodromy_e0_exact(make_params(0.75, math.sqrt(3.0) / 3.0, 0.0))
    assert np.allclose(r.spectrum, -1.0, atol=1e-5)
    assert np.allclose(closed_form_spectrum_e0(0.75, math.sqrt(3.0) / 3.0), -1.0, atol=1e-12)


def test_espectro_exato_um_em_meio_meio():
    r = monodromy_e0_exact(make_params(0.5, 0.5, 0.0))
    assert np.allclose(r.spectrum, 1.0, atol=1e-4)


def test_expm_concorda_com_integracao():
    p = make_params(0.9, 0.68, 0.0)
    assert np.allclose(monodromy(p).M, monodromy_e0_exact(p).M, atol=1e-8)


@pytest.mark.parametrize("e", [0.3, 0.6, 0.9])
def test_monodromia_simpletica(e):
    r = monodromy(make_params(0.5, 0.48, e))
    assert r.symplectic_residual < 1e-9
    assert r.simpletico_ok
    assert r.determinante == pytest.approx(1.0, abs=1e-6)
    assert r.desvio_quadruplas < 1e-6


def test_residuo_simpletico_de_matriz_nao_simpletica():
    assert symplectic_residual(np.eye(4)) == 0.0
    assert symplectic_residual(2.0 * np.eye(4)) > 0.5
    assert np.allclose(J4.T @ J4, np.eye(4))


def test_quadruplas_de_espectro_reciproco():
    assert quadruple_mismatch(np.array([2.0, 0.5, 1j, -1j])) == pytest.approx(0.0, abs=1e-15)
    assert quadruple_mismatch(np.array([2.0, 0.4, 1.0, 1.0])) > 0.01


def test_iterado():
    r = monodromy(make_params(0.5, 0.48, 0.2))
    assert np.allclose(monodromy_iterate(r, 2), r.M @ r.M)
    with pytest.raises(DomainError):
        monodromy_iterate(r, 0)


def test_limites_do_integrador():
    p = make_params(1.0, 0.5, 0.995)
    with pytest.raises(IntegrationError):
        monodromy(p)
    with pytest.raises(DomainError):
        monodromy(make_params(1.0, 0.5, 0.1), tol=1e-3)
    with pytest.raises(DomainError):
        monodromy_e0_exact(make_params(1.0, 0.5, 0.1))


def test_residuo_acima_do_limite_sinaliza():
    tol = Tolerancias(simpletico=1e-30)
    r = monodromy(make_params(0.5, 0.48, 0.1), tolerancias=tol)
    assert not r.simpletico_ok
