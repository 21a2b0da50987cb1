import json

import pytest

import scan
from cli import (
    CODIGO_DOMINIO,
    CODIGO_NUMERICO,
    CODIGO_OK,
    CODIGO_USO,
    SCHEMA_TRACE,
    RunConfig,
    classification_from_json,
    equal_mass_point_from_json,
    run,
    self_test,
)
from common import DomainError, Tolerancias


def _json_de(capsys):
    return json.loads(capsys.readouterr().out)


def test_classify_em_meio_meio(capsys):
    assert run(["classify", "--alpha", "0.5", "--beta", "0.5"]) == CODIGO_OK
    saida = capsys.readouterr().out
    registro = json.loads(saida)
    assert registro["params"]["alpha"] == 0.5
    assert all(re == pytest.approx(1.0, abs=1e-4) and im == pytest.approx(0.0, abs=1e-4) for re, im in registro["spectrum"])
    assert registro["indices"]["omega_plus1"] == [0, 3]
    assert registro["verdict"] == "spectrally-stable-linearly-unstable"

    lido = classification_from_json(saida)
    assert lido["params"].beta == 0.5
    assert lido["monodromy"].shape == (4, 4)
    assert lido["indices"][1].nullity == 3


def test_classify_em_coordenadas_til(capsys):
    assert run(["classify", "--alpha", "1.0", "--beta", "-1.0", "--e", "0.2", "--tilde", "--sem-indices"]) == CODIGO_OK
    registro = _json_de(capsys)
    assert registro["params"]["alpha"] == pytest.approx(1.5)
    assert registro["indices"] is None
    assert registro["verdict"] == "hyperbolic-unstable"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["classify", "--beta", "0.5"],
        ["classify", "--alpha", "x", "--beta", "0.5"],
        ["equal-mass"],
        ["--tolerancia", "N", "index", "--alpha", "2", "--beta", "0.5"],
    ],
)
def test_erros_de_uso(argv, capsys):
    assert run(argv) == CODIGO_USO
    assert "[ERRO]" in capsys.readouterr().err


def test_ajuda_sai_com_zero(capsys):
    assert run(["--help"]) == CODIGO_OK
    assert "classify" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--alpha", "0.5", "--beta", "0.6"],
        ["classify", "--alpha", "0.5", "--beta", "0.4", "--e", "1.0"],
        ["equal-mass", "--y", "-0.1"],
        ["--tolerancia", "inexistente=1", "index", "--alpha", "2", "--beta", "0.5"],
        ["--format", "csv", "index", "--alpha", "2", "--beta", "0.5"],
    ],
)
def test_erros_de_dominio(argv):
    assert run(argv) == CODIGO_DOMINIO


def test_falha_numerica_de_superficies():
    assert run(["nh-surfaces", "--alpha-tilde", "0.3"]) == CODIGO_NUMERICO


def test_index_com_arquivo_de_configuracao(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "command": "index",
        "parameters": {"alpha": 2.0, "beta": 0.5, "e": 0.3, "omega": -1},
        "tolerances": {"passo_N": 4},
    }), encoding="utf-8")
    destino = tmp_path / "saida" / "index.json"
    codigo = run(["--config", str(config), "--output", str(destino), "index", "--omega", "1"])
    assert codigo == CODIGO_OK
    registro = json.loads(destino.read_text(encoding="utf-8"))
    assert registro["omega"] == 1
    assert (registro["index"], registro["nullity"]) == (0, 0)
    assert registro["params"]["e"] == 0.3


@pytest.mark.parametrize(
    "conteudo",
    [
        {"command": "index", "extra": 1},
        {"command": "index", "parameters": {"gamma": 1.0}},
        {"command": "classify", "parameters": {"alpha": 2.0, "beta": 0.5}},
    ],
)
def test_configuracao_invalida(tmp_path, conteudo):
    config = tmp_path / "config.json"
    config.write_text(json.dumps(conteudo), encoding="utf-8")
    assert run(["--config", str(config), "index", "--alpha", "2", "--beta", "0.5"]) == CODIGO_DOMINIO


def test_run_config_tolerancias(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"command": "index", "tolerances": {"N": 48}}), encoding="utf-8")
    cfg = RunConfig.de_arquivo(config)
    assert cfg.tolerancias() == Tolerancias(N=48)
    config.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(DomainError):
        RunConfig.de_arquivo(config)


def test_ponto_de_massas_iguais(capsys):
    assert run(["equal-mass", "--y", "0.3"]) == CODIGO_OK
    ponto = equal_mass_point_from_json(capsys.readouterr().out)
    assert ponto == scan.equal_mass_point(0.3)


@pytest.mark.lento
def test_trace_em_csv(capsys):
    argv = ["trace", "--alpha", "2", "--omega", "1", "--n", "0", "--e-max", "0.05", "--passo", "0.05", "--resolution", "1e-8"]
    assert run(argv) == CODIGO_OK
    linhas = capsys.readouterr().out.splitlines()
    assert linhas[0] == f"#schema={SCHEMA_TRACE}"
    assert len(linhas) == 1 + 1 + 2


@pytest.mark.lento
def test_autoteste():
    df = self_test(Tolerancias())
    assert df["ok"].all(), df.to_string()
    assert len(df) == 6
