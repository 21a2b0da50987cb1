# ==========================================================
# ETAPA PRINCIPAL – ESTABILIDADE LINEAR (4 CORPOS RESTRITO)
# ==========================================================
# Carrega o .env (ERE_STAB_THREADS, ERE_STAB_LOG_DIR,
# ERE_STAB_LOG_CONSOLE) antes de importar os módulos de cálculo
# e delega os subcomandos para cli.run.
# ==========================================================

from dotenv import load_dotenv # Carrega o .env
load_dotenv() # Executa o carregamento

import logging
import sys
from datetime import datetime

import cli

# ===== Configuração de Logs =====
logging.basicConfig(
    level=logging.INFO,
    format="[%(asctime)s] (%(message)s)",
    datefmt="%Y-%m-%d %H:%M:%S"
)


# ==========================================================
# FUNÇÃO PRINCIPAL
# ==========================================================
def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    inicio = datetime.now()
    codigo = cli.run(argv)
    duracao = (datetime.now() - inicio).total_seconds()
    logging.debug(f"PIPELINE GERAL - Execução finalizada (código {codigo}) em {duracao:.2f} segundos.")
    return codigo


# ==========================================================
# EXECUÇÃO DIRETA
# ==========================================================
if __name__ == "__main__":
    sys.exit(main())
