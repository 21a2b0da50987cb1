# ============================================================
# SCAN - VARREDURAS E ESTUDO DE MASSAS IGUAIS
# ------------------------------------------------------------
# Objetivo:
#   - Varrer grades (α, β) ou (α̃, β̃) em paralelo e montar um
#     atlas de vereditos, uma célula por ponto, ordenado pelo
#     índice da grade e independente do número de workers.
#   - Reproduzir o caso m1 = m2 com z* = ½ + i·y no eixo de
#     simetria: massa induzida, (α, β), raízes dos indicadores
#     α − 3β + 1, α − 3β, α − 1, α − 9β²/4 e as famílias de
#     veredito entre raízes consecutivas.
#
# Saída esperada:
#   - DataFrames (pandas) e CSVs em resultados/tabelas com linha
#     de cabeçalho "#schema=".
# ============================================================

from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy import optimize
from tqdm import tqdm

from common import (
    TOL_PADRAO,
    BracketError,
    DomainError,
    MassRangeError,
    NumericalError,
    RootCountError,
    Tolerancias,
    bisect_predicate,
    scan_sign_changes,
)
from model import EssentialParams, alpha_beta_from_geometry, from_tilde, limit_geometry, make_masses, make_params
from regions import StabilityVerdict, classify_e0, classify_general
from utils_log import log_mensagem

logger = logging.getLogger(__name__)

RAIZ3_2 = math.sqrt(3.0) / 2.0
INTERVALOS_Y = {
    "Y1": (-RAIZ3_2, RAIZ3_2 - 1.0),
    "Y2": (0.0, RAIZ3_2),
    "Y3": (RAIZ3_2, RAIZ3_2 + 1.0),
}
GUARDA_POLO = 1e-6
PASSO_RAIZES = 1e-3
XTOL_RAIZES = 1e-8

INDICADORES = {
    "alpha-3beta+1": lambda a, b: a - 3.0 * b + 1.0,
    "alpha-3beta": lambda a, b: a - 3.0 * b,
    "alpha-1": lambda a, b: a - 1.0,
    "alpha-9beta^2/4": lambda a, b: a - 2.25 * b * b,
}

# rótulos esperados por (intervalo, indicador); α − 1 não é validado
RAIZES_ESPERADAS = {
    ("Y1", "alpha-3beta+1"): (),
    ("Y1", "alpha-3beta"): ("y11", "y12"),
    ("Y1", "alpha-9beta^2/4"): ("y0",),
    ("Y2", "alpha-3beta+1"): ("y21", "y24"),
    ("Y2", "alpha-3beta"): ("y22", "y23"),
    ("Y2", "alpha-9beta^2/4"): ("ybar21", "ybar22"),
}
VALORES_TABELADOS = {
    "y11": -0.6724,
    "y12": -0.1590,
    "y0": -0.1355,
    "y21": 0.1403,
    "y22": 0.1796,
    "y23": 0.4224,
    "y24": 0.4937,
    "ybar21": 0.1548,
    "ybar22": 0.4679,
}
M0_TABELADO = 0.00270963

FAMILIAS = {
    "hiperbolico": ("hyperbolic-unstable",),
    "eliptico-hiperbolico": ("elliptic-hyperbolic-unstable",),
    "estavel": ("strongly-linearly-stable", "linearly-stable-not-strongly"),
}

# e = 0: região → vereditos compatíveis
VEREDITOS_REGIAO_E0 = {
    "R1": ("hyperbolic-unstable",),
    "R2": ("strongly-linearly-stable", "linearly-stable-not-strongly", "spectrally-stable-linearly-unstable"),
    "R3": ("elliptic-hyperbolic-unstable",),
    "R4": ("hyperbolic-unstable",),
}

COLUNAS_ATLAS = ["alpha", "beta", "e", "verdict", "i1", "nu1", "im1", "num1", "theta1", "theta2", "symp_residual"]
SCHEMA_ATLAS = "atlas-v1:" + ",".join(COLUNAS_ATLAS)


# ============================================================
# TIPOS
# ============================================================
@dataclass(frozen=True)
class EqualMassPoint:
    y: float
    m: float
    alpha: float
    beta: float
    intervalo: str
    residuo_cc: float


@dataclass(frozen=True)
class GradeVarredura:
    """Retângulo com passos; til=True interpreta os eixos como (α̃, β̃)."""

    alpha_min: float
    alpha_max: float
    beta_min: float
    beta_max: float
    passo_alpha: float
    passo_beta: float
    til: bool = False

    @staticmethod
    def _eixo(lo: float, hi: float, passo: float) -> np.ndarray:
        if passo <= 0 or hi < lo:
            raise DomainError(f"[ERRO] Eixo inválido: [{lo}, {hi}] com passo {passo}")
        n = int(round((hi - lo) / passo))
        return np.round(lo + passo * np.arange(n + 1), 12)

    def pontos(self) -> list[tuple[float, float]]:
        """Pontos (α, β) com α ≥ β, α > 0 e β ≥ 0, em ordem de linha."""
        saida = []
        for a in self._eixo(self.alpha_min, self.alpha_max, self.passo_alpha):
            for b in self._eixo(self.beta_min, self.beta_max, self.passo_beta):
                alpha, beta = from_tilde(a, b) if self.til else (float(a), float(b))
                if alpha > 0 and 0 <= beta <= alpha:
                    saida.append((float(alpha), float(beta)))
        return saida


@dataclass(frozen=True)
class AtlasCell:
    indice: int
    params: Optional[EssentialParams]
    alpha: float
    beta: float
    e: float
    verdict: Optional[StabilityVerdict] = None
    indices: dict = field(default_factory=dict)
    runtime: float = 0.0
    regiao_e0: Optional[str] = None
    erro: Optional[str] = None

    def linha(self) -> dict:
        """Linha do atlas no esquema fixo de colunas."""
        v = self.verdict
        thetas = (v.normal_form.angulos if v is not None and v.normal_form is not None else [])
        thetas = list(thetas) + [math.nan, math.nan]
        i1 = self.indices.get(1)
        im1 = self.indices.get(-1)
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "e": self.e,
            "verdict": v.verdict if v is not None else f"erro:{self.erro.split(':')[0]}",
            "i1": i1.index if i1 else None,
            "nu1": i1.nullity if i1 else None,
            "im1": im1.index if im1 else None,
            "num1": im1.nullity if im1 else None,
            "theta1": thetas[0],
            "theta2": thetas[1],
            "symp_residual": v.monodromia.symplectic_residual if v is not None and v.monodromia else math.nan,
        }


# ============================================================
# MASSAS IGUAIS NO EIXO DE SIMETRIA
# ============================================================
def _intervalo_de(y: float) -> Optional[str]:
    for nome, (lo, hi) in INTERVALOS_Y.items():
        if lo < y < hi:
            return nome
    return None


def _eixo_simetria(y: float) -> tuple[float, float, float, float]:
    """(m, α, β, resíduo relativo da configuração central) sem validação."""
    s = RAIZ3_2 - y
    d = abs(s) ** 3
    q = 0.25 + y * y
    A = 2.0 * y / q**1.5
    m = (s - s / d) / (math.sqrt(3.0) - 2.0 * s / d - A)
    m3 = 1.0 - 2.0 * m
    alpha = 0.5 * (2.0 * m / q**1.5 + m3 / d)
    beta = 0.5 * abs(m * (0.5 - 2.0 * y * y) / q**2.5 - m3 / d)

    termos = (-m * A, m3 * s / d, y, -RAIZ3_2 * m3)
    residuo = abs(sum(termos)) / max(1.0, max(abs(t) for t in termos))
    return m, alpha, beta, residuo


def equal_mass_point(y: float) -> EqualMassPoint:
    """m1 = m2 = m e z* = ½ + i·y; α e β pela forma fechada no eixo."""
    intervalo = _intervalo_de(y)
    if intervalo is None:
        raise DomainError(f"[ERRO] y = {y} fora de Y1 ∪ Y2 ∪ Y3")
    if abs(y - RAIZ3_2) < GUARDA_POLO:
        raise DomainError(f"[ERRO] y = {y} dentro da faixa de guarda do polo √3/2")

    m, alpha, beta, residuo = _eixo_simetria(y)
    if not 0.0 < m < 0.5:
        raise MassRangeError(f"[ERRO] Massa induzida fora de (0, ½): m = {m} em y = {y}")
    if residuo > 1e-10:
        raise NumericalError(f"[ERRO] Resíduo da configuração central {residuo:.3e} em y = {y}")
    return EqualMassPoint(float(y), m, alpha, beta, intervalo, residuo)


def alpha_beta_by_geometry(ponto: EqualMassPoint) -> tuple[float, float]:
    """(α, β) pela soma geral sobre os primários, para conferência."""
    geom = limit_geometry(complex(0.5, ponto.y))
    return alpha_beta_from_geometry(geom, make_masses(ponto.m, ponto.m))


def _indicador(nome: str):
    funcao = INDICADORES[nome]

    def f(y: float) -> float:
        _, alpha, beta, _ = _eixo_simetria(y)
        return funcao(alpha, beta)
    return f


def equal_mass_roots(passo: float = PASSO_RAIZES, xtol: float = XTOL_RAIZES) -> pd.DataFrame:
    """
    Isola as trocas de sinal dos quatro indicadores em Y1 e Y2
    (varredura com `passo`, refinamento por brentq até `xtol`).

    As contagens por indicador são conferidas contra a tabela
    esperada; raízes de α − 1 entram como linhas não validadas.
    """
    etapa = "SCAN - Raízes no eixo de massas iguais"
    log_mensagem(etapa, f"Isolando raízes (passo {passo}, xtol {xtol})...", "inicio")

    linhas = []
    for intervalo in ("Y1", "Y2"):
        lo, hi = INTERVALOS_Y[intervalo]
        lo, hi = lo + GUARDA_POLO, hi - GUARDA_POLO
        for nome in INDICADORES:
            f = _indicador(nome)
            brackets = scan_sign_changes(f, lo, hi, passo)
            raizes = [optimize.brentq(f, br.lo, br.hi, xtol=xtol) for br in brackets]
            esperados = RAIZES_ESPERADAS.get((intervalo, nome))

            if esperados is not None and len(raizes) != len(esperados):
                log_mensagem(etapa, f"Contagem divergente em {intervalo}/{nome}: {len(raizes)}", "erro")
                raise RootCountError(
                    f"[ERRO] {intervalo}, {nome}: {len(raizes)} trocas de sinal, esperadas {len(esperados)} "
                    f"({[round(r, 6) for r in raizes]})"
                )
            rotulos = esperados if esperados is not None else [f"{intervalo}:{nome}:{k}" for k in range(len(raizes))]
            for rotulo, y in zip(rotulos, raizes):
                m, alpha, beta, _ = _eixo_simetria(y)
                tabelado = VALORES_TABELADOS.get(rotulo, math.nan)
                linhas.append({
                    "rotulo": rotulo,
                    "intervalo": intervalo,
                    "indicador": nome,
                    "y": y,
                    "m": m,
                    "alpha": alpha,
                    "beta": beta,
                    "valor_tabelado": tabelado,
                    "desvio": abs(y - tabelado) if esperados is not None else math.nan,
                    "validado": esperados is not None,
                })

    tabela = pd.DataFrame(linhas).sort_values(["intervalo", "y"], kind="mergesort").reset_index(drop=True)
    log_mensagem(etapa, f"{int(tabela['validado'].sum())} raízes validadas, {int((~tabela['validado']).sum())} extras.", "fim")
    return tabela


def _raiz(tabela: pd.DataFrame, rotulo: str) -> float:
    return float(tabela.loc[tabela["rotulo"] == rotulo, "y"].iloc[0])


def _casos_familia(tabela: pd.DataFrame) -> list[tuple[str, float, str, bool]]:
    """(intervalo, y amostrado, família esperada, vale para todo e)."""
    r = {k: _raiz(tabela, k) for k in VALORES_TABELADOS}
    fim_y1 = INTERVALOS_Y["Y1"][1]
    return [
        ("Y1[y11,y12]", 0.5 * (r["y11"] + r["y12"]), "hiperbolico", True),
        ("Y3", RAIZ3_2 + 0.5, "eliptico-hiperbolico", True),
        ("Y2(0,y21)", 0.5 * r["y21"], "eliptico-hiperbolico", True),
        ("Y2(y22,y23)", 0.5 * (r["y22"] + r["y23"]), "hiperbolico", True),
        ("Y1(-√3/2,y11)", 0.5 * (-RAIZ3_2 + r["y11"]), "hiperbolico", False),
        ("Y1(y0,fim)", 0.5 * (r["y0"] + fim_y1), "estavel", False),
    ]


def verdict_family_checks(e_values=(0.0, 0.3, 0.6, 0.9), tabela: Optional[pd.DataFrame] = None,
                          tolerancias: Tolerancias = TOL_PADRAO) -> pd.DataFrame:
    """
    Veredito em um y por subintervalo contra a família esperada.
    Casos marcados só para e = 0 são avaliados apenas nesse valor.
    """
    etapa = "SCAN - Famílias de veredito (massas iguais)"
    log_mensagem(etapa, "Conferindo subintervalos...", "inicio")
    tabela = equal_mass_roots() if tabela is None else tabela

    linhas = []
    for intervalo, y, familia, todo_e in _casos_familia(tabela):
        ponto = equal_mass_point(y)
        for e in e_values:
            if not todo_e and e != 0.0:
                continue
            v = classify_general(make_params(ponto.alpha, ponto.beta, e), tolerancias, com_indices=False)
            linhas.append({
                "intervalo": intervalo,
                "y": y,
                "e": e,
                "familia_esperada": familia,
                "veredito": v.verdict,
                "confere": v.verdict in FAMILIAS[familia],
                "alpha_menos_3beta": ponto.alpha - 3.0 * ponto.beta,
            })
    df = pd.DataFrame(linhas)
    falhas = int((~df["confere"]).sum())
    log_mensagem(etapa, f"{len(df)} casos, {falhas} divergências.", "aviso" if falhas else "fim")
    return df


def _estavel(y: float, e: float, tolerancias: Tolerancias) -> bool:
    ponto = equal_mass_point(y)
    v = classify_general(make_params(ponto.alpha, ponto.beta, e), tolerancias, com_indices=False)
    return v.verdict in FAMILIAS["estavel"]


def verdict_change_y(e: float, lo: Optional[float] = None, hi: Optional[float] = None,
                     resolucao: float = 1e-6, tolerancias: Tolerancias = TOL_PADRAO) -> float:
    """Primeiro y de Y1 (a partir de `lo`) onde o veredito passa a estável, em e fixo."""
    lo = -0.15 if lo is None else lo
    hi = INTERVALOS_Y["Y1"][1] - GUARDA_POLO if hi is None else hi
    br = bisect_predicate(lambda y: _estavel(y, e, tolerancias), lo, hi, resolucao)
    return 0.5 * (br.lo + br.hi)


def estimate_e_star(y: Optional[float] = None, e_hi: float = 0.9, resolucao: float = 1e-3,
                    tolerancias: Tolerancias = TOL_PADRAO) -> Optional[float]:
    """
    Excentricidade em que o trecho estável de Y1 deixa de ser estável
    no y amostrado (padrão: meio de (y0, √3/2 − 1)). None se continua
    estável até e_hi.
    """
    if y is None:
        y = 0.5 * (VALORES_TABELADOS["y0"] + INTERVALOS_Y["Y1"][1])
    if not _estavel(y, 0.0, tolerancias):
        raise BracketError(f"[ERRO] y = {y} não é estável em e = 0")
    if _estavel(y, e_hi, tolerancias):
        return None
    br = bisect_predicate(lambda e: not _estavel(y, e, tolerancias), 0.0, e_hi, resolucao)
    e_star = 0.5 * (br.lo + br.hi)
    logger.info("(SCAN) - e* estimado em y = %.6f: %.4f", y, e_star)
    return e_star


# ============================================================
# VARREDURA
# ============================================================
def _celula(indice: int, alpha: float, beta: float, e: float, tolerancias: Tolerancias) -> AtlasCell:
    inicio = time.perf_counter()
    params, regiao = None, None
    try:
        params = make_params(alpha, beta, e)
        regiao = classify_e0(alpha, beta, tolerancias).major if e == 0.0 else None
        v = classify_general(params, tolerancias)
        return AtlasCell(indice, params, alpha, beta, e, v, v.indices, time.perf_counter() - inicio, regiao)
    except Exception as exc:  # a varredura nunca aborta
        logger.debug("(SCAN) - célula %d (α=%s, β=%s, e=%s) falhou: %s", indice, alpha, beta, e, exc)
        return AtlasCell(indice, params, alpha, beta, e, runtime=time.perf_counter() - inicio,
                         regiao_e0=regiao, erro=f"{type(exc).__name__}: {exc}")


def _workers(workers: Optional[int]) -> int:
    if workers is not None:
        return workers
    valor = os.environ.get("ERE_STAB_THREADS")
    return int(valor) if valor else -1


def sweep(grade: GradeVarredura, e_list, workers: Optional[int] = None,
          tolerancias: Tolerancias = TOL_PADRAO, progresso: bool = True) -> list[AtlasCell]:
    """Uma AtlasCell por (e, α, β), na ordem da grade."""
    etapa = "SCAN - Varredura de estabilidade"
    pontos = grade.pontos()
    tarefas = [(alpha, beta, float(e)) for e in e_list for alpha, beta in pontos]
    log_mensagem(etapa, f"{len(tarefas)} células ({len(pontos)} pontos × {len(e_list)} valores de e).", "inicio")

    celulas = Parallel(n_jobs=_workers(workers))(
        delayed(_celula)(k, alpha, beta, e, tolerancias)
        for k, (alpha, beta, e) in enumerate(tqdm(tarefas, desc="Varredura", disable=not progresso))
    )
    celulas = sorted(celulas, key=lambda c: c.indice)

    falhas = sum(1 for c in celulas if c.erro)
    log_mensagem(etapa, f"Concluída: {len(celulas)} células, {falhas} com erro.", "aviso" if falhas else "fim")
    return celulas


def atlas_dataframe(celulas: list[AtlasCell]) -> pd.DataFrame:
    return pd.DataFrame([c.linha() for c in celulas], columns=COLUNAS_ATLAS)


def summary_counts(celulas: list[AtlasCell]) -> pd.DataFrame:
    """Contagem de vereditos por excentricidade."""
    df = atlas_dataframe(celulas)
    return df.groupby(["e", "verdict"]).size().reset_index(name="celulas")


def consistent_with_e0(celula: AtlasCell, tolerancias: Tolerancias = TOL_PADRAO) -> Optional[bool]:
    """Em e = 0, o veredito numérico cabe na região por sinais? None na fronteira."""
    if celula.e != 0.0 or celula.verdict is None:
        return None
    rotulo = classify_e0(celula.alpha, celula.beta, tolerancias)
    if rotulo.major == "boundary":
        return None
    return celula.verdict.verdict in VEREDITOS_REGIAO_E0[rotulo.major]


def write_csv(df: pd.DataFrame, caminho, schema: str) -> Path:
    """CSV com a primeira linha "#schema=..." seguida da tabela."""
    caminho = Path(caminho)
    caminho.parent.mkdir(parents=True, exist_ok=True)
    with open(caminho, "w", encoding="utf-8", newline="") as f:
        f.write(f"#schema={schema}\n")
        df.to_csv(f, index=False, float_format="%.12g")
    return caminho


def read_csv(caminho) -> tuple[str, pd.DataFrame]:
    caminho = Path(caminho)
    with open(caminho, encoding="utf-8") as f:
        cabecalho = f.readline().strip()
        if not cabecalho.startswith("#schema="):
            raise DomainError(f"[ERRO] {caminho} sem linha #schema=")
        df = pd.read_csv(f)
    return cabecalho[len("#schema="):], df
