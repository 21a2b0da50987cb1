import math

import pandas as pd
import pytest

from common import DomainError
from scan import (
    COLUNAS_ATLAS,
    M0_TABELADO,
    RAIZ3_2,
    SCHEMA_ATLAS,
    VALORES_TABELADOS,
    GradeVarredura,
    alpha_beta_by_geometry,
    atlas_dataframe,
    consistent_with_e0,
    equal_mass_point,
    equal_mass_roots,
    read_csv,
    summary_counts,
    sweep,
    verdict_change_y,
    verdict_family_checks,
    write_csv,
)


@pytest.fixture
def raizes():
    return equal_mass_roots()


def test_ponto_confere_com_soma_geral():
    ponto = equal_mass_point(0.3)
    assert ponto.intervalo == "Y2"
    assert 0.0 < ponto.m < 0.5
    alpha, beta = alpha_beta_by_geometry(ponto)
    assert ponto.alpha == pytest.approx(alpha, rel=1e-10)
    assert ponto.beta == pytest.approx(beta, rel=1e-10)
    assert ponto.residuo_cc < 1e-10


def test_massa_meio_em_y_zero():
    ponto = equal_mass_point(1e-9)
    assert ponto.m == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("y", [1.9, -0.1, -0.9, RAIZ3_2 + 1e-7])
def test_y_fora_do_dominio(y):
    with pytest.raises(DomainError):
        equal_mass_point(y)


def test_limite_no_fim_de_y1_vai_para_meio_meio():
    ponto = equal_mass_point(RAIZ3_2 - 1.0 - 1e-6)
    assert ponto.m == pytest.approx(0.0, abs=1e-4)
    assert (ponto.alpha, ponto.beta) == pytest.approx((0.5, 0.5), abs=1e-4)


def test_raizes_tabeladas(raizes):
    validadas = raizes[raizes["validado"]]
    assert set(validadas["rotulo"]) == set(VALORES_TABELADOS)
    assert (validadas["desvio"] <= 5e-4).all()
    m0 = float(validadas.loc[validadas["rotulo"] == "y0", "m"].iloc[0])
    assert m0 == pytest.approx(M0_TABELADO, abs=1e-6)


def test_raizes_ordenadas_por_intervalo(raizes):
    for _, grupo in raizes.groupby("intervalo"):
        assert grupo["y"].is_monotonic_increasing


@pytest.mark.lento
def test_familias_de_veredito(raizes):
    df = verdict_family_checks(tabela=raizes)
    assert df["confere"].all(), df[~df["confere"]].to_string()
    assert set(df["e"]) == {0.0, 0.3, 0.6, 0.9}
    entre = df[df["intervalo"] == "Y2(y22,y23)"]
    assert (entre["alpha_menos_3beta"] > 0).all()


@pytest.mark.lento
def test_troca_de_veredito_em_y0():
    assert verdict_change_y(0.0) == pytest.approx(VALORES_TABELADOS["y0"], abs=1e-3)


def test_grade_filtra_alpha_menor_que_beta():
    grade = GradeVarredura(0.5, 1.0, 0.0, 1.0, 0.5, 0.5)
    assert grade.pontos() == [(0.5, 0.0), (0.5, 0.5), (1.0, 0.0), (1.0, 0.5), (1.0, 1.0)]
    with pytest.raises(DomainError):
        GradeVarredura(1.0, 0.5, 0.0, 1.0, 0.5, 0.5).pontos()


def test_grade_em_coordenadas_til():
    grade = GradeVarredura(1.0, 1.0, -1.0, -1.0, 0.1, 0.1, til=True)
    ((alpha, beta),) = grade.pontos()
    assert (alpha, beta) == pytest.approx((1.5, 0.5))


@pytest.mark.lento
def test_varredura_independe_do_numero_de_workers():
    grade = GradeVarredura(0.2, 1.0, 0.0, 0.6, 0.2, 0.2)
    um = atlas_dataframe(sweep(grade, [0.0, 0.3], workers=1, progresso=False))
    dois = atlas_dataframe(sweep(grade, [0.0, 0.3], workers=2, progresso=False))
    assert list(um.columns) == COLUNAS_ATLAS
    pd.testing.assert_frame_equal(um, dois)
    assert len(um) == 2 * len(grade.pontos())


@pytest.mark.lento
def test_varredura_em_e0_respeita_regioes():
    passo = 1 / 18
    grade = GradeVarredura(8 * passo, 1.0, 8 * passo, 12 * passo, passo, passo)
    celulas = sweep(grade, [0.0], workers=1, progresso=False)
    veredictos = [consistent_with_e0(c) for c in celulas]
    assert all(v is not False for v in veredictos)
    assert any(v is True for v in veredictos)

    fronteira = {(round(c.alpha, 6), round(c.beta, 6)) for c in celulas if c.regiao_e0 == "boundary"}
    for ponto in [(4 / 9, 4 / 9), (0.5, 0.5), (1.0, 2 / 3)]:
        assert (round(ponto[0], 6), round(ponto[1], 6)) in fronteira
    assert not summary_counts(celulas).empty


def test_celula_com_erro_nao_aborta():
    grade = GradeVarredura(0.5, 0.5, 0.0, 0.0, 0.1, 0.1)
    (celula,) = sweep(grade, [0.995], workers=1, progresso=False)
    assert celula.erro.startswith("DomainError") or celula.erro.startswith("IntegrationError")
    assert celula.linha()["verdict"].startswith("erro:")
    assert consistent_with_e0(celula) is None


def test_csv_com_linha_de_esquema(tmp_path):
    df = pd.DataFrame({"alpha": [0.5, 1.0], "beta": [0.25, math.pi], "verdict": ["hyperbolic-unstable", "unresolved"]})
    caminho = write_csv(df, tmp_path / "tabelas" / "atlas.csv", SCHEMA_ATLAS)
    assert caminho.read_text(encoding="utf-8").splitlines()[0] == f"#schema={SCHEMA_ATLAS}"
    schema, lido = read_csv(caminho)
    assert schema == SCHEMA_ATLAS
    assert lido["verdict"].tolist() == df["verdict"].tolist()
    assert lido["beta"].tolist() == pytest.approx(df["beta"].tolist(), rel=1e-11)


def test_csv_sem_esquema(tmp_path):
    caminho = tmp_path / "solto.csv"
    caminho.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(DomainError):
        read_csv(caminho)
