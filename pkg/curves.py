# ============================================================
# CURVES - SUPERFÍCIES DEGENERADAS E SUPERFÍCIES DE ℛ_NH
# ------------------------------------------------------------
# Objetivo:
#   - Rastrear as superfícies ω-degeneradas β_n(α, ω, e) por
#     bissecção em β sobre a contagem (i_ω + ν_ω) de Galerkin,
#     com continuação em e (passo Δe e reabertura de 0.05·|β|).
#   - Estimar a inclinação ∂β/∂e em e = 0 por diferença central,
#     usando a extensão a e < 0.
#   - Calcular β_k (envelope hiperbólico) e β_s, β_m (lugares de
#     −1-degenerescência) em coordenadas til.
#
# Convenção de famílias (n ≥ 0):
#   - ω = 1 : Γ_n é o primeiro β com (i1 + ν1) ≥ 2n + 1.
#   - ω = −1: Σ_n⁻ / Σ_n⁺ são o primeiro β com (i−1 + ν−1) ≥ 2n + 1
#             e ≥ 2n + 2; cada ramo vive num setor invariante, com
#             limiar n + 1 por setor.
# ============================================================

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from joblib import Parallel, delayed

from common import (
    TOL_PADRAO,
    BracketError,
    DomainError,
    Tolerancias,
    bisect_predicate,
)
from galerkin import SETORES, count_nonpositive, galerkin_indices, kernel_recurrence_test
from model import make_params, make_params_tilde
from regions import beta_from_alpha_theta, monodromia_rapida
from sympl import nullity
from utils_log import log_mensagem

logger = logging.getLogger(__name__)


# ============================================================
# TIPOS
# ============================================================
@dataclass(frozen=True)
class DegenerateCurveSample:
    alpha: float
    e: float
    omega: int
    n: int
    beta: float
    multiplicity: int
    bracket_width: float
    ramo: str = "unico"
    setor: Optional[str] = None

    def como_dicionario(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class NhSurfaces:
    alpha_tilde: float
    e: float
    beta_s: float
    beta_m: float
    beta_k: float

    def como_dicionario(self) -> dict:
        return asdict(self)


# ============================================================
# AUXILIARES
# ============================================================
def closed_form_beta(alpha: float, omega: int, n: int) -> float:
    """Curva de e = 0: θ = n (ω = 1) ou θ = n + ½ (ω = −1)."""
    theta = n if omega == 1 else n + 0.5
    return beta_from_alpha_theta(alpha, theta)


def _workers() -> int:
    valor = os.environ.get("ERE_STAB_THREADS")
    return int(valor) if valor else -1


def _predicado(alpha: float, omega: int, e: float, limiar: int, setor: Optional[str],
               tol: Tolerancias) -> Callable[[float], bool]:
    def pred(beta: float) -> bool:
        params = make_params(alpha, beta, e, strict=False)
        return count_nonpositive(params, omega, tol.N, setor) >= limiar
    return pred


def _localizar(pred: Callable[[float], bool], palpite: Optional[float], xtol: float, teto: float):
    """Abre um intervalo [lo, hi] com pred(lo) falso e pred(hi) verdadeiro e bissecta."""
    if palpite is not None and palpite > 0:
        largura = 0.05 * abs(palpite)
        for _ in range(6):
            lo, hi = max(palpite - largura, 0.0), palpite + largura
            if not pred(lo) and pred(hi):
                return bisect_predicate(pred, lo, hi, xtol)
            largura *= 2.0
        logger.debug("(CURVES) - palpite %.6g sem troca; varrendo desde β = 0", palpite)

    if pred(0.0):
        raise BracketError("[ERRO] Contagem já atinge o limiar em β = 0")
    lo, hi = 0.0, 0.1
    while not pred(hi):
        lo, hi = hi, hi * 1.5
        if lo > teto:
            raise BracketError(f"[ERRO] Nenhum salto de índice abaixo do teto β = {teto}")
    return bisect_predicate(pred, lo, hi, xtol)


def _resolucao(resolution: Optional[float], tol: Tolerancias) -> float:
    resolution = tol.resolucao if resolution is None else float(resolution)
    if resolution < 1e-10:
        raise DomainError(f"[ERRO] Resolução abaixo de 1e-10: {resolution}")
    return resolution


def sector_betas(alpha: float, omega: int, e: float, n: int, resolution: Optional[float] = None,
                 tolerancias: Tolerancias = TOL_PADRAO, palpites: Optional[dict] = None) -> dict:
    """β de cada setor invariante para a família n; devolve {setor: (β, largura)}."""
    resolution = _resolucao(resolution, tolerancias)
    limiares = {"a": n, "b": n + 1} if omega == 1 else {"a": n + 1, "b": n + 1}
    saida = {}
    for setor in SETORES:
        if limiares[setor] == 0:
            continue
        pred = _predicado(alpha, omega, e, limiares[setor], setor, tolerancias)
        palpite = (palpites or {}).get(setor)
        br = _localizar(pred, palpite, resolution, tolerancias.beta_teto)
        saida[setor] = (0.5 * (br.lo + br.hi), br.hi - br.lo)
    return saida


def _multiplicidade(alpha: float, beta: float, e: float, omega: int, tol: Tolerancias) -> int:
    return galerkin_indices(make_params(alpha, beta, e, strict=False), omega, tol).nullity


# ============================================================
# SUPERFÍCIES DEGENERADAS
# ============================================================
def degenerate_beta(alpha: float, omega: int, e: float, n: int, resolution: Optional[float] = None,
                    tolerancias: Tolerancias = TOL_PADRAO, ramo: str = "inferior",
                    palpite: Optional[float] = None) -> DegenerateCurveSample:
    """
    Localiza Γ_n (ω = 1) ou o ramo pedido de Σ_n (ω = −1) em (α, e).

    ramo ∈ {"inferior", "superior"} só importa para ω = −1; quando os
    dois ramos coincidem dentro de 2·resolução a amostra sai com
    ramo "coincidentes".
    """
    if omega not in (1, -1):
        raise DomainError(f"[ERRO] ω deve ser +1 ou −1 (ω = {omega})")
    if abs(e) > 0.95:
        raise DomainError(f"[ERRO] |e| deve ser ≤ 0.95 (e = {e})")
    if n < 0:
        raise DomainError(f"[ERRO] Família n deve ser ≥ 0 (n = {n})")
    resolution = _resolucao(resolution, tolerancias)
    palpite = closed_form_beta(alpha, omega, n) if palpite is None else palpite

    if omega == 1:
        pred = _predicado(alpha, 1, e, 2 * n + 1, None, tolerancias)
        br = _localizar(pred, palpite, resolution, tolerancias.beta_teto)
        beta = 0.5 * (br.lo + br.hi)
        mult = _multiplicidade(alpha, beta, e, 1, tolerancias)
        return DegenerateCurveSample(alpha, e, 1, n, beta, mult, br.hi - br.lo)

    betas = sector_betas(alpha, -1, e, n, resolution, tolerancias, {s: palpite for s in SETORES})
    return _amostra_sigma(alpha, e, n, betas, ramo, resolution, tolerancias)


def _amostra_sigma(alpha, e, n, betas, ramo, resolution, tol) -> DegenerateCurveSample:
    (s_min, (b_min, w_min)), (s_max, (b_max, w_max)) = sorted(betas.items(), key=lambda kv: kv[1][0])
    if abs(b_max - b_min) <= 2.0 * resolution:
        beta = 0.5 * (b_min + b_max)
        mult = _multiplicidade(alpha, beta, e, -1, tol)
        return DegenerateCurveSample(alpha, e, -1, n, beta, mult, max(w_min, w_max), "coincidentes", None)
    if ramo == "inferior":
        beta, w, setor = b_min, w_min, s_min
    elif ramo == "superior":
        beta, w, setor = b_max, w_max, s_max
    else:
        raise DomainError(f"[ERRO] Ramo desconhecido: {ramo}")
    mult = _multiplicidade(alpha, beta, e, -1, tol)
    return DegenerateCurveSample(alpha, e, -1, n, beta, mult, w, ramo, setor)


def slope_at_e0(alpha: float, omega: int, n: int, h: float = 1e-3, ramo: str = "inferior",
                tolerancias: Tolerancias = TOL_PADRAO, resolution: Optional[float] = None) -> float:
    """
    (β(h) − β(−h)) / 2h ao longo do ramo analítico.

    Para ω = −1 o deslocamento t → t + π troca os setores, então o ramo
    é seguido pelo setor que o carrega em +h e avaliado no mesmo setor em −h.
    """
    if not 1e-4 <= h <= 1e-2:
        raise DomainError(f"[ERRO] Passo h fora de [1e-4, 1e-2]: {h}")
    palpite = closed_form_beta(alpha, omega, n)

    if omega == 1:
        mais = degenerate_beta(alpha, 1, h, n, resolution, tolerancias, palpite=palpite).beta
        menos = degenerate_beta(alpha, 1, -h, n, resolution, tolerancias, palpite=palpite).beta
        return (mais - menos) / (2.0 * h)

    palpites = {s: palpite for s in SETORES}
    mais = sector_betas(alpha, -1, h, n, resolution, tolerancias, palpites)
    ordem = sorted(mais, key=lambda s: mais[s][0])
    setor = ordem[0] if ramo == "inferior" else ordem[-1]
    menos = sector_betas(alpha, -1, -h, n, resolution, tolerancias, palpites)
    return (mais[setor][0] - menos[setor][0]) / (2.0 * h)


def trace(alpha: float, omega: int, n: int, e_max: float, passo: Optional[float] = None,
          resolution: Optional[float] = None, tolerancias: Tolerancias = TOL_PADRAO) -> list[DegenerateCurveSample]:
    """
    Coluna de continuação em e ∈ [0, e_max]. Para ω = −1 emite os ramos
    inferior e superior a cada e (ou uma amostra "coincidentes").
    """
    passo = tolerancias.passo_e if passo is None else passo
    if not 0.0 <= e_max <= 0.95:
        raise DomainError(f"[ERRO] e_max deve estar em [0, 0.95] (e_max = {e_max})")
    resolution = _resolucao(resolution, tolerancias)
    valores_e = np.round(np.arange(0.0, e_max + 0.5 * passo, passo), 10)

    amostras: list[DegenerateCurveSample] = []
    palpite = closed_form_beta(alpha, omega, n)
    palpites = {s: palpite for s in SETORES}
    for e in valores_e:
        e = float(min(e, e_max))
        if omega == 1:
            amostra = degenerate_beta(alpha, 1, e, n, resolution, tolerancias, palpite=palpite)
            palpite = amostra.beta
            amostras.append(amostra)
            continue
        betas = sector_betas(alpha, -1, e, n, resolution, tolerancias, palpites)
        palpites = {s: b for s, (b, _) in betas.items()}
        inferior = _amostra_sigma(alpha, e, n, betas, "inferior", resolution, tolerancias)
        amostras.append(inferior)
        if inferior.ramo != "coincidentes":
            amostras.append(_amostra_sigma(alpha, e, n, betas, "superior", resolution, tolerancias))
    return amostras


def trace_columns(alphas: list[float], omega: int, n: int, e_max: float, passo: Optional[float] = None,
                  resolution: Optional[float] = None, tolerancias: Tolerancias = TOL_PADRAO,
                  workers: Optional[int] = None) -> list[DegenerateCurveSample]:
    """Colunas independentes em paralelo; a saída segue a ordem de `alphas`."""
    etapa = "CURVES - Rastreamento de superfícies"
    log_mensagem(etapa, f"Iniciando {len(alphas)} colunas (ω = {omega:+d}, n = {n}, e ≤ {e_max})", "inicio")
    workers = _workers() if workers is None else workers
    colunas = Parallel(n_jobs=workers)(
        delayed(trace)(a, omega, n, e_max, passo, resolution, tolerancias) for a in alphas
    )
    amostras = [s for coluna in colunas for s in coluna]
    log_mensagem(etapa, f"{len(amostras)} amostras rastreadas.", "fim")
    return amostras


def verify_sample(sample: DegenerateCurveSample, tolerancias: Tolerancias = TOL_PADRAO) -> dict:
    """Nulidade de Galerkin, nulidade da monodromia e (ω = 1, e > 0) recorrência."""
    params = make_params(sample.alpha, sample.beta, sample.e, strict=False)
    nu_galerkin = galerkin_indices(params, sample.omega, tolerancias).nullity
    M = monodromia_rapida(params, tolerancias).M
    nu_monodromia = nullity(M, complex(sample.omega), tolerancias.svd)
    recorrencia = None
    if sample.omega == 1 and sample.e > 0:
        recorrencia = kernel_recurrence_test(params)
    concordam = nu_galerkin >= 1 and nu_monodromia >= 1 and recorrencia in (None, "degenerate-1")
    return {
        "nulidade_galerkin": nu_galerkin,
        "nulidade_monodromia": nu_monodromia,
        "recorrencia": recorrencia,
        "concordam": concordam,
    }


def ordering_chain(alpha: float, e: float, n_max: int, resolution: Optional[float] = None,
                   tolerancias: Tolerancias = TOL_PADRAO) -> list[dict]:
    """
    Γ_0 … Γ_{n_max} e Σ_0^± … Σ_{n_max−1}^± numa coluna, ordenados por β.

    Cada item traz a posição esperada, herdada da ordem das curvas
    fechadas em e = 0.
    """
    itens = []
    for n in range(n_max + 1):
        g = degenerate_beta(alpha, 1, e, n, resolution, tolerancias)
        itens.append({"rotulo": f"Gamma_{n}", "beta": g.beta, "chave": (closed_form_beta(alpha, 1, n), 0)})
    for n in range(n_max):
        palpite = closed_form_beta(alpha, -1, n)
        for k, ramo in enumerate(("inferior", "superior")):
            s = degenerate_beta(alpha, -1, e, n, resolution, tolerancias, ramo=ramo)
            itens.append({"rotulo": f"Sigma_{n}{'-' if k == 0 else '+'}", "beta": s.beta, "chave": (palpite, 1 + k)})
    esperado = sorted(itens, key=lambda d: d["chave"])
    for pos, item in enumerate(esperado):
        item["posicao_esperada"] = pos
    cadeia = sorted(itens, key=lambda d: (d["beta"], d["chave"]))
    for item in cadeia:
        item.pop("chave")
    return cadeia


def chain_is_ordered(cadeia: list[dict], resolution: float) -> bool:
    """Ordem esperada preservada e famílias distintas separadas por mais de 2·resolução."""
    if [d["posicao_esperada"] for d in cadeia] != sorted(d["posicao_esperada"] for d in cadeia):
        return False
    for a, b in zip(cadeia, cadeia[1:]):
        mesma_familia = a["rotulo"][:-1] == b["rotulo"][:-1] and a["rotulo"].startswith("Sigma")
        if not mesma_familia and b["beta"] - a["beta"] <= 2.0 * resolution:
            return False
    return True


# ============================================================
# SUPERFÍCIES DA REGIÃO NÃO HIPERBÓLICA
# ============================================================
def _encontra_circulo(alpha_tilde: float, e: float, tol: Tolerancias) -> Callable[[float], bool]:
    def pred(beta_tilde: float) -> bool:
        params = make_params_tilde(alpha_tilde, beta_tilde, e, strict=False)
        espectro = monodromia_rapida(params, tol).spectrum
        return bool(np.any(np.abs(np.abs(espectro) - 1.0) < tol.circulo))
    return pred


def hyperbolic_envelope(alpha_tilde: float, e: float, resolution: float = 1e-8,
                        tolerancias: Tolerancias = TOL_PADRAO) -> float:
    """β̃_k: ínfimo de β̃ ∈ [−1, 0] em que o espectro encontra o círculo unitário."""
    br = bisect_predicate(_encontra_circulo(alpha_tilde, e, tolerancias), -1.0, 0.0, resolution)
    return 0.5 * (br.lo + br.hi)


def nh_surfaces(alpha_tilde: float, e: float, resolution: float = 1e-8,
                tolerancias: Tolerancias = TOL_PADRAO) -> NhSurfaces:
    """
    β̃_k por bissecção em "espectro encontra U"; β̃_s e β̃_m como o
    primeiro β̃ em [β̃_k, 0] com (i−1 + ν−1) ≥ 1 e ≥ 2.
    """
    if alpha_tilde <= 0:
        raise DomainError(f"[ERRO] α̃ deve ser positivo (α̃ = {alpha_tilde})")
    if not 0.0 <= e <= 0.9:
        raise DomainError(f"[ERRO] e deve estar em [0, 0.9] (e = {e})")
    if alpha_tilde > 0.25 + 1.25 * e:
        raise BracketError(
            f"[ERRO] ν−1 = 0 para α̃ > 1/4 + 5e/4 (α̃ = {alpha_tilde}, e = {e}): sem lugares −1-degenerados"
        )

    beta_k = hyperbolic_envelope(alpha_tilde, e, resolution, tolerancias)

    def contagem(beta_tilde: float) -> int:
        params = make_params_tilde(alpha_tilde, beta_tilde, e, strict=False)
        return count_nonpositive(params, -1, tolerancias.N)

    if contagem(0.0) < 2:
        raise BracketError(f"[ERRO] Menos de dois lugares −1-degenerados em [β̃_k, 0] (α̃ = {alpha_tilde}, e = {e})")

    lugares = []
    for limiar in (1, 2):
        br = bisect_predicate(lambda b, k=limiar: contagem(b) >= k, beta_k, 0.0, resolution)
        lugares.append(0.5 * (br.lo + br.hi))
    beta_s, beta_m = lugares
    logger.debug("(CURVES) - ℛ_NH α̃=%.6g e=%.3g: β̃_k=%.9f β̃_s=%.9f β̃_m=%.9f", alpha_tilde, e, beta_k, beta_s, beta_m)
    return NhSurfaces(alpha_tilde, e, beta_s, beta_m, beta_k)
