# ============================================================
# REGIONS - REGIÕES EM e = 0 E VEREDITO DE ESTABILIDADE
# ------------------------------------------------------------
# Objetivo:
#   - Classificar (α, β) em e = 0 nas regiões ℛ1–ℛ4 pelos sinais
#     de 9β² − 4α, α − 3β + 1 e α − 1, com sub-regiões definidas
#     pelas curvas fechadas α_θ(β) = −(θ² + 1) + √(9β² + 4θ²).
#   - Tabelas fechadas de (i_ω, ν_ω) em e = 0 para ω = ±1.
#   - Veredito de estabilidade em e qualquer: monodromia + forma
#     normal + índices de Galerkin.
#   - Subdivisão da região não hiperbólica (𝓑_h, 𝓑_k, 𝓑_s, 𝓑_m)
#     e casos limite.
# ============================================================

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from common import TOL_PADRAO, BracketError, DomainError, Tolerancias, UnresolvedClassError
from essential import MonodromyResult, monodromy, monodromy_e0_exact
from galerkin import IndexPair, galerkin_indices
from model import EssentialParams, Z_L, alpha_beta_from_geometry, limit_geometry, make_masses, make_params
from sympl import SpectrumClass, classify, nullity

logger = logging.getLogger(__name__)

VEREDITOS = (
    "strongly-linearly-stable",
    "linearly-stable-not-strongly",
    "spectrally-stable-linearly-unstable",
    "elliptic-hyperbolic-unstable",
    "hyperbolic-unstable",
    "unresolved",
)


# ============================================================
# TIPOS
# ============================================================
@dataclass(frozen=True)
class RegionLabel:
    """
    major  : "R1".."R4" ou "boundary"
    regiao : região fechada de pertença (igual a major fora da fronteira)
    minor  : sub-região ("R2half-", "R2half*", "R2half+", "R3n-",
             "R3n*", "R3n+", "R3nhalf*") quando em ℛ2/ℛ3
    n      : inteiro associado à sub-região de ℛ3
    """

    major: str
    regiao: str
    minor: Optional[str] = None
    n: Optional[int] = None
    thetas: Optional[tuple] = None
    etas: Optional[tuple] = None
    adjacentes: tuple = ()


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: str
    normal_form: Optional[SpectrumClass]
    indices: dict
    monodromia: Optional[MonodromyResult] = None
    motivo: str = ""


@dataclass(frozen=True)
class NhSubregion:
    nome: str
    forma_normal_prevista: str
    indice_menos1_previsto: int
    superficies: Optional[object] = None


# ============================================================
# CURVAS FECHADAS E ÂNGULOS
# ============================================================
def alpha_theta(beta: float, theta: float) -> float:
    """Curva α_θ(β) = −(θ² + 1) + √(9β² + 4θ²), onde θ2 = θ."""
    return -(theta * theta + 1.0) + math.sqrt(9.0 * beta * beta + 4.0 * theta * theta)


def beta_from_alpha_theta(alpha: float, theta: float) -> float:
    """Inversão da curva: β = √((α + θ² + 1)² − 4θ²)/3."""
    return math.sqrt((alpha + theta * theta + 1.0) ** 2 - 4.0 * theta * theta) / 3.0


def thetas_e0(alpha: float, beta: float) -> tuple[Optional[float], Optional[float]]:
    """θ1 = √(1 − α − √disc), θ2 = √(1 − α + √disc); None quando imaginário."""
    disc = 9.0 * beta * beta - 4.0 * alpha
    if disc < 0:
        return None, None
    r = math.sqrt(disc)
    t1 = 1.0 - alpha - r
    t2 = 1.0 - alpha + r
    return (math.sqrt(max(t1, 0.0)) if t1 > -1e-14 else None,
            math.sqrt(max(t2, 0.0)) if t2 > -1e-14 else None)


def etas_e0(alpha: float, beta: float) -> Optional[tuple[float, float]]:
    disc = 9.0 * beta * beta - 4.0 * alpha
    if disc < 0:
        return None
    r = math.sqrt(disc)
    return alpha - 1.0 + r, alpha - 1.0 - r


# ============================================================
# REGIÕES EM e = 0
# ============================================================
def _regiao_por_sinais(sd: float, sg: float, sh: float) -> str:
    if sd < 0:
        return "R1"
    if sg < 0 or (sg == 0 and sh > 0):
        return "R3"
    if sh <= 0:
        return "R2"
    return "R4"


def _subregiao(regiao: str, alpha: float, beta: float, banda: float):
    if regiao == "R2":
        d = alpha - alpha_theta(beta, 0.5)
        if abs(d) <= banda:
            return "R2half*", None
        return ("R2half-", None) if d > 0 else ("R2half+", None)
    if regiao != "R3":
        return None, None
    _, t2 = thetas_e0(alpha, beta)
    if t2 is None:
        return None, None
    n = int(math.floor(t2 + 0.5))
    # 1) sobre uma curva inteira ou semi-inteira
    if n >= 1 and abs(alpha - alpha_theta(beta, n)) <= banda:
        return "R3n*", n
    m = int(math.floor(t2))
    if abs(alpha - alpha_theta(beta, m + 0.5)) <= banda:
        return "R3nhalf*", m
    # 2) interior: θ ∈ (m, m + ½) ou (m + ½, m + 1)
    if t2 - m < 0.5:
        return "R3n+", m
    return "R3n-", m + 1


def classify_e0(alpha: float, beta: float, tolerancias: Tolerancias = TOL_PADRAO) -> RegionLabel:
    """
    Classificação exata por sinais. Expressões dentro da faixa
    `fronteira` são perturbadas para os dois lados; se mais de uma
    região resultar, o ponto é "boundary" com as regiões adjacentes.
    """
    banda = tolerancias.fronteira
    valores = (9.0 * beta * beta - 4.0 * alpha, alpha - 3.0 * beta + 1.0, alpha - 1.0)
    sinais_proprios = [0.0 if abs(v) <= banda else math.copysign(1.0, v) for v in valores]
    regiao = _regiao_por_sinais(*sinais_proprios)

    opcoes = [(-1.0, 1.0) if s == 0.0 else (s,) for s in sinais_proprios]
    vizinhas = sorted({_regiao_por_sinais(*combo) for combo in itertools.product(*opcoes)})
    major = regiao if len(vizinhas) == 1 else "boundary"

    minor, n = _subregiao(regiao, alpha, beta, banda)
    t1, t2 = thetas_e0(alpha, beta)
    if regiao == "R2":
        thetas = (t1, t2)
    elif regiao == "R3":
        thetas = (None, t2)
    else:
        thetas = None
    return RegionLabel(major, regiao, minor, n, thetas, etas_e0(alpha, beta),
                       tuple(vizinhas) if major == "boundary" else ())


def index_table_e0(alpha: float, beta: float, omega: int, tolerancias: Tolerancias = TOL_PADRAO) -> IndexPair:
    """Valor fechado de (i_ω, ν_ω) em e = 0, sem cálculo numérico."""
    banda = tolerancias.fronteira
    rotulo = classify_e0(alpha, beta, tolerancias)
    g = alpha - 3.0 * beta + 1.0

    if omega == 1:
        if g > banda:
            return IndexPair(0, 0)
        if abs(g) <= banda:
            especial = abs(alpha - 0.5) <= banda and abs(beta - 0.5) <= banda
            return IndexPair(0, 3) if especial else IndexPair(0, 1)
        _, t2 = thetas_e0(alpha, beta)
        if rotulo.minor == "R3n*":
            return IndexPair(2 * rotulo.n - 1, 2)
        return IndexPair(2 * int(math.floor(t2)) + 1, 0)

    if omega == -1:
        if rotulo.regiao in ("R1", "R4"):
            return IndexPair(0, 0)
        if rotulo.regiao == "R2":
            return {"R2half-": IndexPair(0, 0), "R2half*": IndexPair(0, 2), "R2half+": IndexPair(2, 0)}[rotulo.minor]
        _, t2 = thetas_e0(alpha, beta)
        if rotulo.minor == "R3nhalf*":
            return IndexPair(2 * rotulo.n, 2)
        if t2 < 0.5:
            return IndexPair(0, 0)
        return IndexPair(2 * int(math.floor(t2 + 0.5)), 0)

    raise DomainError(f"[ERRO] ω deve ser +1 ou −1 (ω = {omega})")


# ============================================================
# VEREDITO EM e QUALQUER
# ============================================================
def monodromia_rapida(params: EssentialParams, tolerancias: Tolerancias = TOL_PADRAO) -> MonodromyResult:
    """Exponencial exata em e = 0; integração DOP853 nos demais casos."""
    if params.e == 0.0:
        return monodromy_e0_exact(params, tolerancias)
    return monodromy(params, tolerancias=tolerancias)


def verdict_from_class(cls: SpectrumClass) -> str:
    no_circulo = cls.dimensao_no_circulo
    if no_circulo == 0:
        return "hyperbolic-unstable"
    if no_circulo < 4:
        return "elliptic-hyperbolic-unstable"
    if not cls.semissimples:
        return "spectrally-stable-linearly-unstable"
    if not cls.tem_raiz_real_unitaria and cls.krein_definido():
        return "strongly-linearly-stable"
    return "linearly-stable-not-strongly"


def classify_general(params: EssentialParams, tolerancias: Tolerancias = TOL_PADRAO,
                     com_indices: bool = True, estrito: bool = False) -> StabilityVerdict:
    """
    Monodromia → forma normal → índices de Galerkin para ω = ±1.

    Falhas de classificação viram veredito "unresolved" com o motivo;
    com estrito=True a UnresolvedClassError é propagada.
    """
    resultado = monodromia_rapida(params, tolerancias)
    indices: dict = {}
    if com_indices:
        if params.fronteira:
            # β = 0: operador positivo definido
            indices = {1: IndexPair(0, 0), -1: IndexPair(0, 0)}
        else:
            indices = {w: galerkin_indices(params, w, tolerancias) for w in (1, -1)}

    try:
        cls = classify(resultado.M, tolerancias)
    except UnresolvedClassError as exc:
        if estrito:
            raise
        logger.debug("(REGIONS) - classificação não resolvida: %s", exc)
        return StabilityVerdict("unresolved", None, indices, resultado, str(exc))

    return StabilityVerdict(verdict_from_class(cls), cls, indices, resultado)


def hyperbolic_nullities(M: np.ndarray, tol: float = TOL_PADRAO.svd) -> dict:
    """ν_ω para ω ∈ {1, −1, i}: todos nulos num veredito hiperbólico."""
    return {w: nullity(M, complex(w), tol) for w in (1, -1, 1j)}


# ============================================================
# REGIÃO NÃO HIPERBÓLICA
# ============================================================
PREVISOES_NH = {
    "B_h": ("hyperbolic", 0),
    "B_k*": ("boundary: Krein collision", 0),
    "B_k": ("R(θ1)⋄R(θ2), θ1 ∈ (0,π), θ2 ∈ (π,2π), 2π−θ2 < θ1", 0),
    "B_s*": ("boundary: −1-degenerate", 0),
    "B_s": ("D(λ<0)⋄R(θ), θ ∈ (π,2π)", 1),
    "B_m*": ("boundary: −1-degenerate", 1),
    "B_m": ("R(θ1)⋄R(θ2), θ1, θ2 ∈ (π,2π)", 2),
}


def expected_minus1_index_nh(subregiao: str) -> int:
    return PREVISOES_NH[subregiao][1]


def nh_subregion(alpha_tilde: float, beta_tilde: float, e: float,
                 tolerancias: Tolerancias = TOL_PADRAO, resolucao: float = 1e-8) -> NhSubregion:
    """Localiza (α̃, β̃) em 𝓑_h, 𝓑_k, 𝓑_s, 𝓑_m (ou nas superfícies entre elas)."""
    import curves

    if not -1.0 < beta_tilde < 0.0:
        raise DomainError(f"[ERRO] β̃ = {beta_tilde} fora da região não hiperbólica (−1, 0)")

    superficies = None
    beta_k = curves.hyperbolic_envelope(alpha_tilde, e, resolucao, tolerancias)
    try:
        superficies = curves.nh_surfaces(alpha_tilde, e, resolucao, tolerancias)
        cortes = [(superficies.beta_k, "B_k*"), (superficies.beta_s, "B_s*"), (superficies.beta_m, "B_m*")]
        depois = {"B_k*": "B_k", "B_s*": "B_s", "B_m*": "B_m"}
    except BracketError:
        cortes = [(beta_k, "B_k*")]
        depois = {"B_k*": "B_k"}

    nome = "B_h"
    for valor, rotulo in cortes:
        if abs(beta_tilde - valor) <= 2.0 * resolucao:
            nome = rotulo
            break
        if beta_tilde > valor:
            nome = depois[rotulo]
    forma, indice = PREVISOES_NH[nome]
    return NhSubregion(nome, forma, indice, superficies)


# ============================================================
# CASOS LIMITE
# ============================================================
def limit_cases() -> list[dict]:
    """
    1) massas iguais com z* no baricentro: α = 3√3/2, β = 0;
    2) m1 = m2 → 0 com z* = ½ + i(1 + √3/2): (α, β) = (½, ½).
    """
    centro = limit_geometry((0.0 + 1.0 + Z_L) / 3.0)
    a_c, b_c = alpha_beta_from_geometry(centro, make_masses(1 / 3, 1 / 3))
    b_c = 0.0 if b_c < 1e-14 else b_c
    return [
        {
            "caso": "baricentro-massas-iguais",
            "alpha": a_c,
            "beta": b_c,
            "veredito_esperado": "hyperbolic-unstable",
        },
        {
            "caso": "limite-m1-m2-nulos",
            "alpha": 0.5,
            "beta": 0.5,
            "zstar": complex(0.5, 1.0 + math.sqrt(3.0) / 2.0),
            "veredito_esperado": "spectrally-stable-linearly-unstable",
        },
    ]


def limit_case_verdict(caso: dict, e: float, tolerancias: Tolerancias = TOL_PADRAO) -> StabilityVerdict:
    params = make_params(caso["alpha"], caso["beta"], e)
    return classify_general(params, tolerancias)
