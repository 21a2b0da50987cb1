# ============================================================
# CLI - LINHA DE COMANDO
# ------------------------------------------------------------
# Objetivo:
#   - Expor as análises como subcomandos com saída legível por
#     máquina (JSON no padrão do projeto, CSV com "#schema=").
#   - Mesclar arquivo de configuração (--config) com as opções da
#     linha de comando; as opções vencem.
#
# Códigos de saída:
#   0 sucesso | 1 erro de domínio | 2 falha numérica | 64 uso
# ============================================================

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
import pandas as pd
from tabulate import tabulate

import curves
import scan
from common import DomainError, NumericalError, Tolerancias
from essential import closed_form_spectrum_e0, monodromy, spectrum_distance
from galerkin import IndexPair, galerkin_indices, positivity_kernel_residual
from model import EssentialParams, lagrangian_beta, make_masses, make_params, make_params_tilde
from regions import StabilityVerdict, classify_general, index_table_e0
from utils_log import etapa_cronometrada, log_mensagem

logger = logging.getLogger(__name__)

CODIGO_OK = 0
CODIGO_DOMINIO = 1
CODIGO_NUMERICO = 2
CODIGO_USO = 64

OBRIGATORIO = object()

# parâmetros por subcomando: nome → (tipo, padrão)
PARAMETROS: dict[str, dict[str, tuple]] = {
    "classify": {
        "alpha": (float, OBRIGATORIO), "beta": (float, OBRIGATORIO), "e": (float, 0.0),
        "tilde": (bool, False), "sem_indices": (bool, False),
    },
    "monodromy": {
        "alpha": (float, OBRIGATORIO), "beta": (float, OBRIGATORIO), "e": (float, 0.0),
        "tilde": (bool, False), "tol": (float, 1e-12),
    },
    "index": {
        "alpha": (float, OBRIGATORIO), "beta": (float, OBRIGATORIO), "e": (float, 0.0),
        "omega": (int, 1), "N": (int, 64),
    },
    "trace": {
        "alpha": (float, OBRIGATORIO), "omega": (int, OBRIGATORIO), "n": (int, OBRIGATORIO),
        "e_max": (float, OBRIGATORIO), "passo": (float, 0.01), "resolution": (float, 1e-10),
        "verificar": (bool, False),
    },
    "nh-surfaces": {
        "alpha_tilde": (float, OBRIGATORIO), "e": (float, 0.0), "resolution": (float, 1e-8),
    },
    "sweep": {
        "alpha_min": (float, OBRIGATORIO), "alpha_max": (float, OBRIGATORIO),
        "beta_min": (float, OBRIGATORIO), "beta_max": (float, OBRIGATORIO),
        "passo_alpha": (float, OBRIGATORIO), "passo_beta": (float, OBRIGATORIO),
        "e": (list, [0.0]), "til": (bool, False), "workers": (int, None),
    },
    "equal-mass": {"roots": (bool, False), "y": (float, None)},
    "self-test": {},
}
CHAVES_CONFIG = {"command", "parameters", "output_path", "format", "tolerances"}

COLUNAS_TRACE = ["alpha", "e", "omega", "n", "beta", "multiplicity", "bracket_width", "ramo", "setor"]
SCHEMA_TRACE = "trace-v1:" + ",".join(COLUNAS_TRACE)
SCHEMA_RAIZES = "raizes-v1:rotulo,intervalo,indicador,y,m,alpha,beta,valor_tabelado,desvio,validado"


class UsoInvalido(Exception):
    def __init__(self, mensagem: str, uso: str = ""):
        super().__init__(mensagem)
        self.uso = uso


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsoInvalido(message, self.format_usage())


# ============================================================
# CONFIGURAÇÃO
# ============================================================
@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    format: Optional[str] = None
    tolerances: dict = field(default_factory=dict)

    @classmethod
    def de_arquivo(cls, caminho) -> "RunConfig":
        with open(caminho, "r", encoding="utf-8") as f:
            dados = json.load(f)
        if not isinstance(dados, dict):
            raise DomainError(f"[ERRO] Configuração {caminho} não é um objeto JSON")
        desconhecidas = sorted(set(dados) - CHAVES_CONFIG)
        if desconhecidas:
            raise DomainError(f"[ERRO] Chaves desconhecidas em {caminho}: {desconhecidas}")
        return cls(
            command=dados.get("command", ""),
            parameters=dict(dados.get("parameters", {})),
            output_path=dados.get("output_path"),
            format=dados.get("format"),
            tolerances=dict(dados.get("tolerances", {})),
        )

    def tolerancias(self) -> Tolerancias:
        return Tolerancias.de_dicionario(self.tolerances)


def _flag(nome: str) -> str:
    return "--" + nome.replace("_", "-")


def construir_parser() -> _Parser:
    parser = _Parser(prog="ere-stab", description="Estabilidade linear da parte essencial (4 corpos restrito).")
    parser.add_argument("--config", help="Arquivo JSON com command/parameters/output_path/format/tolerances.")
    parser.add_argument("--output", help="Arquivo de saída (padrão: saída padrão).")
    parser.add_argument("--format", choices=["json", "csv"], help="Formato de saída.")
    parser.add_argument("--tolerancia", action="append", default=[], metavar="CHAVE=VALOR",
                        help="Sobrescreve uma tolerância (repetível).")
    parser.add_argument("--verbose", action="store_true", help="Log em nível DEBUG.")
    sub = parser.add_subparsers(dest="command", required=True)

    for comando, parametros in PARAMETROS.items():
        p = sub.add_parser(comando)
        for nome, (tipo, _) in parametros.items():
            if tipo is bool:
                p.add_argument(_flag(nome), dest=nome, action="store_const", const=True, default=None)
            elif tipo is list:
                p.add_argument(_flag(nome), dest=nome, type=float, nargs="+", default=None)
            else:
                p.add_argument(_flag(nome), dest=nome, type=tipo, default=None)
    return parser


def montar_config(args: argparse.Namespace) -> RunConfig:
    """Padrões ← arquivo ← linha de comando."""
    base = RunConfig.de_arquivo(args.config) if args.config else RunConfig(command=args.command)
    if base.command and base.command != args.command:
        raise DomainError(f"[ERRO] Configuração é de '{base.command}', comando pedido '{args.command}'")

    esperados = PARAMETROS[args.command]
    desconhecidos = sorted(set(base.parameters) - set(esperados))
    if desconhecidos:
        raise DomainError(f"[ERRO] Parâmetros desconhecidos para {args.command}: {desconhecidos}")

    valores = {}
    for nome, (tipo, padrao) in esperados.items():
        valor = getattr(args, nome, None)
        if valor is None:
            valor = base.parameters.get(nome, padrao)
        if valor is OBRIGATORIO:
            raise UsoInvalido(f"parâmetro obrigatório ausente: {_flag(nome)}")
        valores[nome] = valor

    tolerancias = dict(base.tolerances)
    for item in args.tolerancia:
        chave, sep, valor = item.partition("=")
        if not sep:
            raise UsoInvalido(f"--tolerancia espera CHAVE=VALOR (recebido '{item}')")
        tolerancias[chave.strip()] = valor.strip()

    return RunConfig(
        command=args.command,
        parameters=valores,
        output_path=args.output or base.output_path,
        format=args.format or base.format,
        tolerances=tolerancias,
    )


# ============================================================
# REGISTROS JSON
# ============================================================
def _par_complexo(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _espectro_ordenado(espectro) -> list[list[float]]:
    return [_par_complexo(z) for z in sorted(np.asarray(espectro, dtype=complex), key=lambda z: (z.real, z.imag))]


def classification_record(v: StabilityVerdict) -> dict:
    m = v.monodromia
    indices = None
    if v.indices:
        indices = {"omega_plus1": v.indices[1].como_lista(), "omega_minus1": v.indices[-1].como_lista()}
    return {
        "params": m.params.como_dicionario(),
        "monodromy": m.M.tolist(),
        "spectrum": _espectro_ordenado(m.spectrum),
        "indices": indices,
        "verdict": v.verdict,
        "normal_form": v.normal_form.label if v.normal_form is not None else None,
    }


def params_from_json(d: dict) -> EssentialParams:
    return make_params(d["alpha"], d["beta"], d["e"], strict=False)


def classification_from_json(texto: str) -> dict:
    """Reconstrói o registro de classify com tipos do projeto."""
    d = json.loads(texto)
    indices = None
    if d.get("indices"):
        indices = {1: IndexPair(*d["indices"]["omega_plus1"]), -1: IndexPair(*d["indices"]["omega_minus1"])}
    return {
        "params": params_from_json(d["params"]),
        "monodromy": np.array(d["monodromy"], dtype=float),
        "spectrum": np.array([complex(re, im) for re, im in d["spectrum"]]),
        "indices": indices,
        "verdict": d["verdict"],
        "normal_form": d["normal_form"],
    }


def nh_surfaces_from_json(texto: str) -> curves.NhSurfaces:
    return curves.NhSurfaces(**json.loads(texto))


def equal_mass_point_from_json(texto: str) -> scan.EqualMassPoint:
    d = json.loads(texto)
    return scan.EqualMassPoint(**{f.name: d[f.name] for f in fields(scan.EqualMassPoint)})


# ============================================================
# SAÍDA
# ============================================================
@dataclass
class Saida:
    tipo: str  # "json", "tabela" ou "texto"
    conteudo: Any
    schema: str = ""
    codigo: int = CODIGO_OK


def _texto_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _emitir(saida: Saida, cfg: RunConfig) -> None:
    formato = cfg.format
    if saida.tipo == "json":
        if formato == "csv":
            raise DomainError(f"[ERRO] {cfg.command} produz um registro; use --format json")
        texto = _texto_json(saida.conteudo)
    elif saida.tipo == "tabela":
        if formato == "json":
            texto = _texto_json(json.loads(saida.conteudo.to_json(orient="records", double_precision=15)))
        else:
            buffer = io.StringIO()
            buffer.write(f"#schema={saida.schema}\n")
            saida.conteudo.to_csv(buffer, index=False, float_format="%.12g")
            texto = buffer.getvalue()
    else:
        texto = saida.conteudo

    if cfg.output_path:
        caminho = Path(cfg.output_path)
        caminho.parent.mkdir(parents=True, exist_ok=True)
        caminho.write_text(texto, encoding="utf-8")
        log_mensagem(f"CLI - {cfg.command}", f"Saída gravada em {caminho}", "info")
    else:
        sys.stdout.write(texto)


# ============================================================
# SUBCOMANDOS
# ============================================================
def _params(p: dict, strict: bool = True) -> EssentialParams:
    if p.get("tilde"):
        return make_params_tilde(p["alpha"], p["beta"], p["e"], strict=strict)
    return make_params(p["alpha"], p["beta"], p["e"], strict=strict)


def _cmd_classify(p: dict, tol: Tolerancias) -> Saida:
    v = classify_general(_params(p), tol, com_indices=not p["sem_indices"])
    return Saida("json", classification_record(v))


def _cmd_monodromy(p: dict, tol: Tolerancias) -> Saida:
    r = monodromy(_params(p), tol=p["tol"], tolerancias=tol)
    return Saida("json", {
        "params": r.params.como_dicionario(),
        "monodromy": r.M.tolist(),
        "spectrum": _espectro_ordenado(r.spectrum),
        "symplectic_residual": r.symplectic_residual,
        "desvio_quadruplas": r.desvio_quadruplas,
        "determinante": r.determinante,
        "passos": r.passos,
        "avaliacoes": r.avaliacoes,
    })


def _cmd_index(p: dict, tol: Tolerancias) -> Saida:
    params = _params(p)
    par = galerkin_indices(params, p["omega"], tol, N=p["N"])
    return Saida("json", {"params": params.como_dicionario(), "omega": p["omega"],
                          "index": par.index, "nullity": par.nullity, "N": par.N})


def _cmd_trace(p: dict, tol: Tolerancias) -> Saida:
    amostras = curves.trace(p["alpha"], p["omega"], p["n"], p["e_max"], p["passo"], p["resolution"], tol)
    df = pd.DataFrame([a.como_dicionario() for a in amostras], columns=COLUNAS_TRACE)
    schema = SCHEMA_TRACE
    if p["verificar"]:
        verif = pd.DataFrame([curves.verify_sample(a, tol) for a in amostras])
        df = pd.concat([df, verif], axis=1)
        schema += "," + ",".join(verif.columns)
    return Saida("tabela", df, schema)


def _cmd_nh_surfaces(p: dict, tol: Tolerancias) -> Saida:
    s = curves.nh_surfaces(p["alpha_tilde"], p["e"], p["resolution"], tol)
    return Saida("json", s.como_dicionario())


def _cmd_sweep(p: dict, tol: Tolerancias) -> Saida:
    grade = scan.GradeVarredura(p["alpha_min"], p["alpha_max"], p["beta_min"], p["beta_max"],
                                p["passo_alpha"], p["passo_beta"], bool(p["til"]))
    celulas = scan.sweep(grade, p["e"], p["workers"], tol)
    resumo = scan.summary_counts(celulas)
    log_mensagem("CLI - sweep", "Resumo por veredito:\n" + tabulate(resumo, headers="keys", tablefmt="github", showindex=False), "info")
    return Saida("tabela", scan.atlas_dataframe(celulas), scan.SCHEMA_ATLAS)


def _cmd_equal_mass(p: dict, tol: Tolerancias) -> Saida:
    if bool(p["roots"]) == (p["y"] is not None):
        raise UsoInvalido("equal-mass exige exatamente uma opção: --roots ou --y Y")
    if p["y"] is not None:
        ponto = scan.equal_mass_point(p["y"])
        return Saida("json", asdict(ponto))

    tabela = scan.equal_mass_roots()
    print(tabulate(tabela[["rotulo", "intervalo", "indicador", "y", "m", "valor_tabelado"]],
                   headers="keys", tablefmt="github", showindex=False, floatfmt=".8f"), file=sys.stderr)
    return Saida("tabela", tabela, SCHEMA_RAIZES)


# ============================================================
# AUTOTESTE
# ============================================================
def _checagem(nome: str, funcao: Callable[[], tuple[bool, str]]) -> dict:
    try:
        ok, detalhe = funcao()
    except Exception as exc:
        ok, detalhe = False, f"{type(exc).__name__}: {exc}"
    return {"checagem": nome, "ok": bool(ok), "detalhe": detalhe}


def self_test(tol: Tolerancias) -> pd.DataFrame:
    """Oráculos rápidos: espectro em e = 0, índices, núcleo positivo, raízes, β_L, Γ_1."""

    def espectro_e0():
        pior = 0.0
        for alpha, beta, limite in ((0.5, 0.48, 1e-8), (0.9, 0.68, 1e-8), (0.75, math.sqrt(3.0) / 3.0, 1e-5)):
            r = monodromy(make_params(alpha, beta, 0.0), tolerancias=tol)
            d = spectrum_distance(r.spectrum, closed_form_spectrum_e0(alpha, beta))
            if d > limite:
                return False, f"(α, β) = ({alpha}, {beta}): distância {d:.2e}"
            pior = max(pior, d)
        return True, f"maior distância {pior:.2e}"

    def indices_e0():
        for alpha, beta in ((0.5, 0.48), (1.5, 1.0), (4.0, 2.0), (2.0, 2.0)):
            params = make_params(alpha, beta, 0.0)
            for w in (1, -1):
                g = galerkin_indices(params, w, tol)
                t = index_table_e0(alpha, beta, w, tol)
                if (g.index, g.nullity) != (t.index, t.nullity):
                    return False, f"({alpha}, {beta}), ω={w}: Galerkin {g.como_lista()} ≠ tabela {t.como_lista()}"
        return True, "8 pares conferem"

    def nucleo_positivo():
        pior = max(positivity_kernel_residual(e) for e in (0.0, 0.3, 0.6, 0.9))
        return pior < 1e-8, f"resíduo máximo {pior:.2e}"

    def raizes():
        tabela = scan.equal_mass_roots()
        validadas = tabela[tabela["validado"]]
        pior = float(validadas["desvio"].max())
        m0 = float(validadas.loc[validadas["rotulo"] == "y0", "m"].iloc[0])
        ok = pior <= 5e-4 and abs(m0 - scan.M0_TABELADO) <= 1e-6
        return ok, f"desvio máximo {pior:.1e}, m0 = {m0:.8f}"

    def beta_lagrangiano():
        b = lagrangian_beta(make_masses(1 / 3, 1 / 3))
        return abs(b - 9.0) < 1e-12, f"β_L = {b:.12f}"

    def gamma1():
        amostra = curves.degenerate_beta(4.0, 1, 0.0, 1, 1e-10, tol)
        esperado = math.sqrt(32.0) / 3.0
        return abs(amostra.beta - esperado) < 1e-6, f"β = {amostra.beta:.9f} (fechado {esperado:.9f})"

    checagens = [
        ("espectro e=0", espectro_e0),
        ("índices e=0", indices_e0),
        ("núcleo de A(0,0,e)", nucleo_positivo),
        ("raízes massas iguais", raizes),
        ("β lagrangiano", beta_lagrangiano),
        ("curva Γ_1 em e=0", gamma1),
    ]
    return pd.DataFrame([_checagem(nome, f) for nome, f in checagens])


def _cmd_self_test(p: dict, tol: Tolerancias) -> Saida:
    df = self_test(tol)
    texto = tabulate(df, headers="keys", tablefmt="github", showindex=False) + "\n"
    return Saida("texto", texto, codigo=CODIGO_OK if df["ok"].all() else CODIGO_NUMERICO)


COMANDOS: dict[str, Callable[[dict, Tolerancias], Saida]] = {
    "classify": _cmd_classify,
    "monodromy": _cmd_monodromy,
    "index": _cmd_index,
    "trace": _cmd_trace,
    "nh-surfaces": _cmd_nh_surfaces,
    "sweep": _cmd_sweep,
    "equal-mass": _cmd_equal_mass,
    "self-test": _cmd_self_test,
}


# ============================================================
# ENTRADA
# ============================================================
def run(argv: list[str]) -> int:
    parser = construir_parser()
    try:
        args = parser.parse_args(argv)
    except UsoInvalido as exc:
        print(exc.uso + f"[ERRO] {exc}", file=sys.stderr)
        return CODIGO_USO
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    etapa = f"CLI - {args.command}"
    try:
        cfg = montar_config(args)
        tol = cfg.tolerancias()
        with etapa_cronometrada(etapa, f"Parâmetros: {cfg.parameters}"):
            saida = COMANDOS[cfg.command](cfg.parameters, tol)
            _emitir(saida, cfg)
    except UsoInvalido as exc:
        print(parser.format_usage() + f"[ERRO] {exc}", file=sys.stderr)
        return CODIGO_USO
    except DomainError as exc:
        log_mensagem(etapa, str(exc), "erro")
        return CODIGO_DOMINIO
    except NumericalError as exc:
        log_mensagem(etapa, str(exc), "erro")
        return CODIGO_NUMERICO
    except Exception as exc:
        logging.error(f"[ERRO FATAL] Falha inesperada em {etapa}: {exc}", exc_info=True)
        return CODIGO_NUMERICO

    return saida.codigo
