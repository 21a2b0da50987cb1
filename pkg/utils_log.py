# utils_log.py
# ============================================================
# LOG PADRONIZADO DAS ETAPAS DE CÁLCULO
# ------------------------------------------------------------
# Console colorido em stderr (stdout fica para JSON/CSV) e
# arquivo $ERE_STAB_LOG_DIR/execucao.log.
# ============================================================
from contextlib import contextmanager
from datetime import datetime
import os
import sys
import time

CORES = {
    "inicio": "\033[95m",   # roxo
    "fim": "\033[92m",      # verde
    "info": "\033[94m",     # azul
    "aviso": "\033[93m",    # amarelo
    "erro": "\033[91m",     # vermelho
}
RESET = "\033[0m"


def caminho_log() -> str:
    return os.path.join(os.environ.get("ERE_STAB_LOG_DIR", "logs"), "execucao.log")


def _console_ativo() -> bool:
    return os.environ.get("ERE_STAB_LOG_CONSOLE", "1") != "0"


def _gravar(texto: str) -> None:
    caminho = caminho_log()
    os.makedirs(os.path.dirname(caminho) or ".", exist_ok=True)
    with open(caminho, "a", encoding="utf-8") as f:
        f.write(texto + "\n")


def log_mensagem(etapa, mensagem, tipo="info"):
    """
    Exibe e registra uma mensagem de etapa.
    tipo: 'info', 'inicio', 'fim', 'aviso', 'erro'
    """
    hora = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    texto = f"[{hora}] ({etapa}) - {mensagem}"
    if _console_ativo():
        print(CORES.get(tipo, RESET) + texto + RESET, file=sys.stderr)
    _gravar(texto)


@contextmanager
def etapa_cronometrada(etapa, descricao):
    """Registra 'inicio' e, se o bloco terminar sem exceção, 'fim' com a duração."""
    log_mensagem(etapa, descricao, "inicio")
    inicio = time.perf_counter()
    yield
    log_mensagem(etapa, f"Concluído em {time.perf_counter() - inicio:.2f} s.", "fim")
