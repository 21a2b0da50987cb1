import pytest

from utils_log import caminho_log, etapa_cronometrada, log_mensagem


def _linhas():
    with open(caminho_log(), encoding="utf-8") as f:
        return f.read().splitlines()


def test_mensagem_vai_para_o_arquivo(capsys):
    log_mensagem("TESTE", "olá", "aviso")
    (linha,) = _linhas()
    assert linha.endswith("(TESTE) - olá")
    assert capsys.readouterr().err == ""


def test_console_em_stderr(monkeypatch, capsys):
    monkeypatch.setenv("ERE_STAB_LOG_CONSOLE", "1")
    log_mensagem("TESTE", "eco")
    capturado = capsys.readouterr()
    assert capturado.out == ""
    assert "(TESTE) - eco" in capturado.err


def test_etapa_cronometrada():
    with etapa_cronometrada("TESTE", "bloco"):
        pass
    inicio, fim = _linhas()
    assert inicio.endswith("bloco")
    assert "Concluído em" in fim


def test_etapa_com_excecao_nao_registra_fim():
    with pytest.raises(RuntimeError):
        with etapa_cronometrada("TESTE", "bloco"):
            raise RuntimeError("falhou")
    assert len(_linhas()) == 1
