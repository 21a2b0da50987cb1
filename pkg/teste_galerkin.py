import numpy as np
import pytest

from common import DomainError, Tolerancias, eigvals_symmetric
from essential import monodromy
from galerkin import (
    SETORES,
    assemble,
    count_nonpositive,
    fourier_f,
    fourier_f_quadrature,
    galerkin_indices,
    kernel_recurrence_test,
    positivity_kernel_residual,
)
from model import make_params
from regions import index_table_e0
from sympl import nullity

# pontos longe das curvas degeneradas, cobrindo ℛ1..ℛ4 e as sub-regiões
PONTOS_TABELA = [
    (0.3, 0.1),     # ℛ1
    (2.0, 0.95),    # ℛ4
    (0.56, 0.5),    # ℛ2, abaixo da curva θ = ½
    (0.52, 0.5),    # ℛ2, acima da curva θ = ½
    (1.9, 0.98),    # ℛ3, θ2 < ½
    (0.8, 0.62),    # ℛ3, θ2 ∈ (½, 1)
    (1.5, 1.0),     # ℛ3, θ2 ∈ (1, 3/2)
    (4.0, 2.0),
    (2.0, 2.0),
    (5.3, 5.3),     # θ2 ≈ 3.3
]


@pytest.mark.parametrize("e", [0.1, 0.5, 0.9])
def test_fourier_forma_fechada_contra_quadratura(e):
    fhat = fourier_f(e, 6)
    for k in range(7):
        assert fhat[k] == pytest.approx(fourier_f_quadrature(e, k), abs=1e-10)


def test_fourier_circular():
    assert np.allclose(fourier_f(0.0, 3), [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        fourier_f(1.0, 3)


def test_montagem_dimensoes_e_simetria():
    p = make_params(1.5, 0.7, 0.4)
    N = 16
    prob = assemble(p, 1, N)
    assert prob.dimensao == 2 * (2 * N + 1)
    assert np.allclose(prob.matrix, prob.matrix.T)
    assert assemble(p, -1, N).dimensao == 4 * N
    with pytest.raises(DomainError):
        assemble(p, 1, 4)
    with pytest.raises(DomainError):
        assemble(p, 2, 16)


def test_setores_somam_a_matriz_completa():
    p = make_params(1.5, 0.7, 0.4)
    total = count_nonpositive(p, 1, 24)
    assert total == sum(count_nonpositive(p, 1, 24, s) for s in SETORES)


def test_setores_isoespectrais_em_e0_para_menos_um():
    p = make_params(1.5, 1.0, 0.0)
    wa = eigvals_symmetric(assemble(p, -1, 16, "a").matrix)
    wb = eigvals_symmetric(assemble(p, -1, 16, "b").matrix)
    assert np.allclose(np.sort(wa), np.sort(wb))


@pytest.mark.parametrize("alpha, beta", PONTOS_TABELA)
@pytest.mark.parametrize("omega", [1, -1])
def test_indices_e0_conferem_com_tabela(alpha, beta, omega):
    par = galerkin_indices(make_params(alpha, beta, 0.0), omega)
    tabela = index_table_e0(alpha, beta, omega)
    assert (par.index, par.nullity) == (tabela.index, tabela.nullity)


def test_indices_e0_valores_conhecidos():
    p = make_params(4.0, 2.0, 0.0)
    assert galerkin_indices(p, 1).como_lista() == [3, 0]
    assert galerkin_indices(p, -1).como_lista() == [2, 0]


@pytest.mark.parametrize("e", [0.0, 0.3, 0.6, 0.9])
def test_nucleo_de_positividade(e):
    assert positivity_kernel_residual(e) < 1e-8
    assert positivity_kernel_residual(e, c=(0.0, 1.0)) < 1e-8


@pytest.mark.parametrize("e", [0.2, 0.5, 0.8])
def test_reta_gama_zero_tem_nulidade_um(e):
    # α = 3β − 1 ⇒ λ4 = 0: constante no núcleo para ω = 1
    p = make_params(2.0, 1.0, e)
    par = galerkin_indices(p, 1)
    assert (par.index, par.nullity) == (0, 1)
    assert nullity(monodromy(p).M, 1 + 0j) == 1
    assert kernel_recurrence_test(p) == "degenerate-1"


@pytest.mark.parametrize("alpha, beta", [(2.0, 0.5), (1.0, 0.3), (3.0, 1.0)])
@pytest.mark.parametrize("e", [0.2, 0.5, 0.8])
def test_nulidade_de_galerkin_igual_a_da_monodromia_com_alpha_maior_que_3beta(alpha, beta, e):
    p = make_params(alpha, beta, e)
    M = monodromy(p).M
    for omega in (1, -1):
        assert galerkin_indices(p, omega).nullity == nullity(M, complex(omega))


@pytest.mark.parametrize("alpha, beta, e", [(4.0, 2.0, 0.2), (4.0, 2.0, 0.5), (4.0, 2.0, 0.8), (2.0, 2.0, 0.8)])
def test_nulidade_de_galerkin_igual_a_da_monodromia_em_ponto_hiperbolico_eliptico(alpha, beta, e):
    p = make_params(alpha, beta, e)
    M = monodromy(p).M
    for omega in (1, -1):
        assert galerkin_indices(p, omega).nullity == nullity(M, complex(omega)) == 0


def test_indice_um_impar_em_pontos_aleatorios_da_regiao_eliptico_hiperbolica():
    rng = np.random.default_rng(7)
    for _ in range(8):
        beta = rng.uniform(0.8, 2.5)
        alpha = rng.uniform(beta, 3.0 * beta - 1.0)
        e = rng.uniform(0.0, 0.7)
        par = galerkin_indices(make_params(alpha, beta, e), 1)
        assert par.nullity == 0, (alpha, beta, e)
        assert par.index > 0 and par.index % 2 == 1, (alpha, beta, e)


def test_recorrencia_pre_condicoes():
    with pytest.raises(DomainError):
        kernel_recurrence_test(make_params(2.0, 0.5, 0.0))
    with pytest.raises(DomainError):
        kernel_recurrence_test(make_params(2.0, 0.5, 0.3), maxN=16)


def test_recorrencia_fora_da_curva():
    assert kernel_recurrence_test(make_params(2.0, 0.5, 0.3)) != "degenerate-1"


@pytest.mark.parametrize("e", [0.0, 0.3, 0.7])
def test_indice_nao_cresce_com_alpha(e):
    contagens = [count_nonpositive(make_params(a, 1.0, e), 1, 48) for a in np.arange(1.0, 3.01, 0.25)]
    assert all(x >= y for x, y in zip(contagens, contagens[1:]))
    assert contagens[0] > contagens[-1] == 0


@pytest.mark.parametrize("omega", [1, -1])
@pytest.mark.parametrize("e", [0.0, 0.3, 0.7])
def test_indice_nao_decresce_com_beta(e, omega):
    contagens = [count_nonpositive(make_params(3.0, b, e), omega, 48) for b in np.arange(0.25, 3.01, 0.25)]
    assert all(x <= y for x, y in zip(contagens, contagens[1:]))
    assert contagens[0] == 0
    if omega == 1:
        assert contagens[-1] > 0


def test_tolerancia_de_truncamento_customizada():
    tol = Tolerancias(N=32, passo_N=16)
    par = galerkin_indices(make_params(2.0, 0.5, 0.3), 1, tol)
    assert par.N == 32 and par.converged
    assert par.como_lista() == [0, 0]
