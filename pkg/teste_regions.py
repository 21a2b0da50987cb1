import math

import pytest

from common import DomainError
from essential import monodromy
from model import make_params
from regions import (
    PREVISOES_NH,
    alpha_theta,
    beta_from_alpha_theta,
    classify_e0,
    classify_general,
    expected_minus1_index_nh,
    hyperbolic_nullities,
    index_table_e0,
    limit_case_verdict,
    limit_cases,
    nh_subregion,
    thetas_e0,
    verdict_from_class,
)
from sympl import classify


@pytest.mark.parametrize(
    "alpha, beta, regiao",
    [
        (0.3, 0.1, "R1"),
        (0.5, 0.48, "R2"),
        (0.9, 0.68, "R3"),
        (2.0, 0.95, "R4"),
    ],
)
def test_regioes_interiores(alpha, beta, regiao):
    rotulo = classify_e0(alpha, beta)
    assert rotulo.major == regiao
    assert rotulo.adjacentes == ()


@pytest.mark.parametrize(
    "alpha, beta, vizinhas",
    [
        (4 / 9, 4 / 9, {"R1", "R2"}),
        (0.5, 0.5, {"R2", "R3"}),
        (1.0, 2 / 3, {"R1", "R2", "R3", "R4"}),
    ],
)
def test_pontos_de_fronteira(alpha, beta, vizinhas):
    rotulo = classify_e0(alpha, beta)
    assert rotulo.major == "boundary"
    assert set(rotulo.adjacentes) == vizinhas


def test_subregioes():
    assert classify_e0(0.56, 0.5).minor == "R2half-"
    assert classify_e0(0.52, 0.5).minor == "R2half+"
    rotulo = classify_e0(4.0, 2.0)
    assert (rotulo.minor, rotulo.n) == ("R3n+", 1)
    rotulo = classify_e0(0.8, 0.62)
    assert (rotulo.minor, rotulo.n) == ("R3n-", 1)


def test_sobre_curva_inteira():
    beta = 1.5
    alpha = alpha_theta(beta, 1.0)
    rotulo = classify_e0(alpha, beta)
    assert (rotulo.minor, rotulo.n) == ("R3n*", 1)
    assert index_table_e0(alpha, beta, 1).como_lista() == [1, 2]
    assert thetas_e0(alpha, beta)[1] == pytest.approx(1.0)


def test_curva_invertida():
    for theta in (0.5, 1.0, 2.5):
        beta = beta_from_alpha_theta(3.0, theta)
        assert alpha_theta(beta, theta) == pytest.approx(3.0, abs=1e-12)


def test_tabela_de_indices():
    assert index_table_e0(0.5, 0.5, 1).como_lista() == [0, 3]
    assert index_table_e0(2.0, 1.0, 1).como_lista() == [0, 1]
    assert index_table_e0(2.0, 2.0, 1).como_lista() == [5, 0]
    assert index_table_e0(2.0, 2.0, -1).como_lista() == [4, 0]
    assert index_table_e0(0.52, 0.5, -1).como_lista() == [2, 0]
    with pytest.raises(DomainError):
        index_table_e0(1.0, 0.5, 2)


@pytest.mark.parametrize(
    "alpha, beta, e, veredito",
    [
        (0.3, 0.1, 0.0, "hyperbolic-unstable"),
        (2.0, 0.95, 0.0, "hyperbolic-unstable"),
        (0.9, 0.68, 0.0, "elliptic-hyperbolic-unstable"),
        (0.5, 0.48, 0.0, "strongly-linearly-stable"),
        (2.0, 0.5, 0.4, "hyperbolic-unstable"),
        (4.0, 2.0, 0.0, "elliptic-hyperbolic-unstable"),
    ],
)
def test_veredito_geral(alpha, beta, e, veredito):
    v = classify_general(make_params(alpha, beta, e), com_indices=False)
    assert v.verdict == veredito


@pytest.mark.parametrize("e", [0.0, 0.3, 0.6, 0.9])
@pytest.mark.parametrize("alpha, beta", [(2.0, 0.5), (1.0, 0.3), (3.0, 1.0)])
def test_alpha_maior_que_3beta_e_hiperbolico(alpha, beta, e):
    v = classify_general(make_params(alpha, beta, e))
    assert v.verdict == "hyperbolic-unstable"
    assert all(abs(abs(z) - 1.0) > 1e-4 for z in v.monodromia.spectrum)
    assert all(par.como_lista() == [0, 0] for par in v.indices.values())
    assert set(hyperbolic_nullities(v.monodromia.M).values()) == {0}


def test_beta_nulo_tem_indices_triviais():
    v = classify_general(make_params(1.0, 0.0, 0.2))
    assert v.verdict == "hyperbolic-unstable"
    assert v.indices[1].como_lista() == [0, 0]


def test_veredito_a_partir_de_classe():
    M = monodromy(make_params(0.5, 0.48, 0.0)).M
    assert verdict_from_class(classify(M)) == "strongly-linearly-stable"


def test_casos_limite():
    casos = {c["caso"]: c for c in limit_cases()}
    centro = casos["baricentro-massas-iguais"]
    assert centro["alpha"] == pytest.approx(3 * math.sqrt(3) / 2)
    assert centro["beta"] == 0.0
    assert limit_case_verdict(centro, 0.0).verdict == centro["veredito_esperado"]
    assert limit_case_verdict(centro, 0.5).verdict == centro["veredito_esperado"]


def test_limite_meio_meio_em_e0():
    caso = {c["caso"]: c for c in limit_cases()}["limite-m1-m2-nulos"]
    v = classify_general(make_params(caso["alpha"], caso["beta"], 0.0), com_indices=False)
    assert v.verdict == caso["veredito_esperado"]
    assert v.normal_form.nulidades[1] == 3


@pytest.mark.parametrize("e", [0.2, 0.5])
def test_limite_meio_meio_com_excentricidade(e):
    caso = {c["caso"]: c for c in limit_cases()}["limite-m1-m2-nulos"]
    v = classify_general(make_params(caso["alpha"], caso["beta"], e), com_indices=False, estrito=True)
    assert v.verdict == "spectrally-stable-linearly-unstable"
    assert v.normal_form.label == "I2⋄N1(1,1)"
    assert v.normal_form.nulidades == {1: 3, -1: 0}


def test_previsoes_da_regiao_nao_hiperbolica():
    assert expected_minus1_index_nh("B_h") == 0
    assert expected_minus1_index_nh("B_s") == 1
    assert expected_minus1_index_nh("B_m") == 2
    assert set(PREVISOES_NH) == {"B_h", "B_k*", "B_k", "B_s*", "B_s", "B_m*", "B_m"}


def test_sub_regiao_fora_do_intervalo():
    with pytest.raises(DomainError):
        nh_subregion(0.1, 0.5, 0.0)


@pytest.mark.lento
def test_sub_regioes_nao_hiperbolicas_em_e0():
    # α̃ = 0.1: β_k ≈ −0.0429 e β_s = β_m ≈ −0.0378 (curva θ = ½)
    assert nh_subregion(0.1, -0.5, 0.0).nome == "B_h"
    assert nh_subregion(0.1, -0.04, 0.0).nome == "B_k"
    assert nh_subregion(0.1, -0.01, 0.0).nome == "B_m"
