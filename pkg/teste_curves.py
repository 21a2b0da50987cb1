import pytest

from common import BracketError, DomainError
from curves import (
    chain_is_ordered,
    closed_form_beta,
    degenerate_beta,
    hyperbolic_envelope,
    nh_surfaces,
    ordering_chain,
    slope_at_e0,
    trace,
    trace_columns,
    verify_sample,
)
from regions import alpha_theta

pytestmark = pytest.mark.lento


def test_forma_fechada_inverte_a_curva():
    for n in range(3):
        beta = closed_form_beta(2.0, 1, n)
        assert alpha_theta(beta, n) == pytest.approx(2.0, abs=1e-12)
        beta = closed_form_beta(2.0, -1, n)
        assert alpha_theta(beta, n + 0.5) == pytest.approx(2.0, abs=1e-12)
    assert closed_form_beta(2.0, 1, 0) == pytest.approx(1.0)


@pytest.mark.parametrize("alpha", [1.0, 2.0, 4.0])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_gamma_em_e0_reproduz_forma_fechada(alpha, n):
    amostra = degenerate_beta(alpha, 1, 0.0, n, resolution=1e-9)
    assert amostra.beta == pytest.approx(closed_form_beta(alpha, 1, n), abs=1e-7)
    assert amostra.multiplicity == (1 if n == 0 else 2)


@pytest.mark.parametrize("n", [0, 1])
def test_sigma_em_e0_coincide(n):
    amostra = degenerate_beta(2.0, -1, 0.0, n, resolution=1e-9)
    assert amostra.ramo == "coincidentes"
    assert amostra.beta == pytest.approx(closed_form_beta(2.0, -1, n), abs=1e-7)
    assert amostra.multiplicity == 2


def test_validacao_de_argumentos():
    with pytest.raises(DomainError):
        degenerate_beta(2.0, 0, 0.1, 0)
    with pytest.raises(DomainError):
        degenerate_beta(2.0, 1, 0.97, 0)
    with pytest.raises(DomainError):
        degenerate_beta(2.0, 1, 0.1, -1)
    with pytest.raises(DomainError):
        degenerate_beta(2.0, 1, 0.1, 0, resolution=1e-12)
    with pytest.raises(DomainError):
        slope_at_e0(2.0, 1, 0, h=0.1)
    with pytest.raises(DomainError):
        trace(2.0, 1, 0, e_max=0.99)


@pytest.mark.parametrize("omega, n", [(1, 0), (1, 1), (-1, 1)])
def test_inclinacao_nula(omega, n):
    assert slope_at_e0(2.0, omega, n) == pytest.approx(0.0, abs=1e-3)


def test_inclinacao_de_sigma_zero():
    assert slope_at_e0(2.0, -1, 0, ramo="inferior") == pytest.approx(-1 / 24, abs=1e-3)
    assert slope_at_e0(2.0, -1, 0, ramo="superior") == pytest.approx(1 / 24, abs=1e-3)


def test_sigma_zero_separa_para_e_positivo():
    inferior = degenerate_beta(2.0, -1, 0.2, 0, resolution=1e-9, ramo="inferior")
    superior = degenerate_beta(2.0, -1, 0.2, 0, resolution=1e-9, ramo="superior")
    assert inferior.beta < superior.beta
    assert {inferior.setor, superior.setor} == {"a", "b"}


def test_trace_continua_a_partir_da_forma_fechada():
    amostras = trace(2.0, 1, 1, e_max=0.1, passo=0.05, resolution=1e-8)
    assert [a.e for a in amostras] == pytest.approx([0.0, 0.05, 0.1])
    assert amostras[0].beta == pytest.approx(closed_form_beta(2.0, 1, 1), abs=1e-6)
    assert all(a.omega == 1 and a.n == 1 for a in amostras)


def test_trace_sigma_emite_dois_ramos():
    amostras = trace(2.0, -1, 0, e_max=0.1, passo=0.1, resolution=1e-8)
    assert [a.ramo for a in amostras] == ["coincidentes", "inferior", "superior"]


def test_colunas_em_paralelo_seguem_a_ordem():
    amostras = trace_columns([2.0, 3.0], 1, 0, e_max=0.05, passo=0.05, resolution=1e-8, workers=2)
    assert [a.alpha for a in amostras] == [2.0, 2.0, 3.0, 3.0]
    # Γ_0 é a reta α = 3β − 1 para todo e
    assert all(a.beta == pytest.approx((a.alpha + 1) / 3, abs=1e-7) for a in amostras)


def test_verificacao_independente_de_gamma_um():
    amostra = degenerate_beta(2.0, 1, 0.3, 1)
    assert amostra.multiplicity == 2
    resultado = verify_sample(amostra)
    assert resultado["nulidade_galerkin"] == resultado["nulidade_monodromia"] == 2
    assert resultado["recorrencia"] == "degenerate-1"
    assert resultado["concordam"]


@pytest.mark.parametrize("ramo", ["inferior", "superior"])
def test_verificacao_independente_de_sigma_zero(ramo):
    amostra = degenerate_beta(2.0, -1, 0.2, 0, resolution=1e-9, ramo=ramo)
    resultado = verify_sample(amostra)
    assert resultado["nulidade_galerkin"] == resultado["nulidade_monodromia"] == 1
    assert resultado["recorrencia"] is None
    assert resultado["concordam"]


@pytest.mark.parametrize("e", [0.0, 0.2])
def test_cadeia_de_curvas_ordenada(e):
    cadeia = ordering_chain(2.0, e, 1, resolution=1e-9)
    assert [d["rotulo"] for d in cadeia][0] == "Gamma_0"
    assert len(cadeia) == 4
    assert chain_is_ordered(cadeia, 1e-9)


def test_cadeia_fora_de_ordem_e_detectada():
    cadeia = [
        {"rotulo": "Gamma_0", "beta": 1.0, "posicao_esperada": 1},
        {"rotulo": "Sigma_0-", "beta": 1.1, "posicao_esperada": 0},
    ]
    assert not chain_is_ordered(cadeia, 1e-9)


def test_superficies_nao_hiperbolicas_em_e0():
    sup = nh_surfaces(0.1, 0.0)
    assert sup.beta_k == pytest.approx(-0.042933, abs=1e-4)
    assert sup.beta_s == pytest.approx(-0.037823, abs=1e-4)
    assert sup.beta_m == pytest.approx(sup.beta_s, abs=1e-7)
    assert hyperbolic_envelope(0.1, 0.0) == pytest.approx(sup.beta_k, abs=1e-7)


def test_superficies_fora_do_alcance():
    with pytest.raises(BracketError):
        nh_surfaces(0.3, 0.0)
    with pytest.raises(DomainError):
        nh_surfaces(0.0, 0.1)
    with pytest.raises(DomainError):
        nh_surfaces(0.1, 0.95)
