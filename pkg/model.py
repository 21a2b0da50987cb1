# ============================================================
# MODEL - MASSAS, GEOMETRIA LIMITE E PARÂMETROS ESSENCIAIS
# ------------------------------------------------------------
# Objetivo:
#   - Converter os dados físicos (massas dos primários e posição
#     limite z* do corpo sem massa) nos parâmetros (α, β).
#   - Calcular os coeficientes limite da redução (k0, l0, β20,
#     β110, β120, β220) e o parâmetro de massa lagrangiano β_L.
#   - Empacotar (α, β, e) em EssentialParams com λ3, λ4 e as
#     coordenadas til (α̃, β̃).
#
# Convenções:
#   - Posições complexas no triângulo de lado unitário:
#     q1 = 0, q2 = 1, q3 = z_L = 1/2 + i·√3/2.
#   - O reescalonamento por α0 só é aplicado dentro de
#     reduction_coefficients; α e β não dependem da escala.
# ============================================================

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from common import CollisionError, DomainError

Z_L = complex(0.5, math.sqrt(3.0) / 2.0)
TOL_COLISAO = 1e-9
TOL_SOMA_MASSAS = 1e-12


# ============================================================
# TIPOS
# ============================================================
@dataclass(frozen=True)
class MassConfig:
    m1: float
    m2: float
    m3: float
    alpha0: float
    mu0: float
    betaL: float

    def massas(self) -> np.ndarray:
        return np.array([self.m1, self.m2, self.m3])


@dataclass(frozen=True)
class LimitGeometry:
    q1: complex
    q2: complex
    q3: complex
    zstar: complex

    def primarios(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.q3], dtype=complex)


@dataclass(frozen=True)
class ReductionCoefficients:
    k0: float
    l0: complex
    beta20: float
    beta110: complex
    beta120: complex
    beta220: complex

    @property
    def lambda3(self) -> float:
        return (3.0 + self.beta20) / 2.0 + abs(self.beta220)

    @property
    def lambda4(self) -> float:
        return (3.0 + self.beta20) / 2.0 - abs(self.beta220)


@dataclass(frozen=True)
class EssentialParams:
    """
    Terna (α, β, e) com os derivados λ3 = 1 + α + 3β, λ4 = 1 + α − 3β
    e as coordenadas til (α̃, β̃) = T(α, β).

    `fronteira` marca β = 0, tratado como caso positivo definido.
    """

    alpha: float
    beta: float
    e: float
    lambda3: float
    lambda4: float
    alpha_tilde: float
    beta_tilde: float
    fronteira: bool = False

    def com_e(self, e: float, strict: bool = False) -> "EssentialParams":
        return make_params(self.alpha, self.beta, e, strict=strict)

    def com_beta(self, beta: float, strict: bool = False) -> "EssentialParams":
        return make_params(self.alpha, beta, self.e, strict=strict)

    def como_dicionario(self) -> dict:
        d = asdict(self)
        d.pop("lambda3")
        d.pop("lambda4")
        d.pop("fronteira")
        return d


# ============================================================
# TRANSFORMAÇÃO TIL
# ============================================================
def to_tilde(alpha: float, beta: float) -> tuple[float, float]:
    """T(α, β) = (α − β, −α + 3β − 1)."""
    return alpha - beta, -alpha + 3.0 * beta - 1.0


def from_tilde(alpha_tilde: float, beta_tilde: float) -> tuple[float, float]:
    beta = (alpha_tilde + beta_tilde + 1.0) / 2.0
    return alpha_tilde + beta, beta


# ============================================================
# CONSTRUTORES
# ============================================================
def make_masses(m1: float, m2: float, permitir_limite: bool = False) -> MassConfig:
    """
    Monta MassConfig com m3 = 1 − m1 − m2.

    Com permitir_limite=True aceita massas nulas (limites degenerados
    usados por lagrangian_beta); α0 vira infinito quando o radicando zera.
    """
    m3 = 1.0 - m1 - m2
    massas = (m1, m2, m3)
    if permitir_limite:
        if min(massas) < 0:
            raise DomainError(f"[ERRO] Massas negativas: {massas}")
    elif min(massas) <= 0:
        raise DomainError(f"[ERRO] Massas devem ser positivas: {massas}")

    radicando = m1 + m2 - (m1 * m1 + m1 * m2 + m2 * m2)
    if radicando > 0:
        alpha0 = radicando ** -0.5
        mu0 = alpha0 ** -3
    else:
        alpha0, mu0 = math.inf, 0.0
    betaL = 27.0 * (m1 * m2 + m2 * m3 + m3 * m1)
    return MassConfig(m1, m2, m3, alpha0, mu0, betaL)


def limit_geometry(zstar: complex) -> LimitGeometry:
    geom = LimitGeometry(0j, 1 + 0j, Z_L, complex(zstar))
    _distancias(geom)
    return geom


def make_params(alpha: float, beta: float, e: float, strict: bool = True) -> EssentialParams:
    """
    Valida e empacota (α, β, e).

    strict=True : α ≥ β ≥ 0, α > 0, e ∈ [0, 1).
    strict=False: β ≥ 0 e e ∈ (−1, 1); usado pelo rastreamento de curvas
                  além de α = β e pela extensão a e < 0.
    """
    alpha, beta, e = float(alpha), float(beta), float(e)
    if not all(math.isfinite(v) for v in (alpha, beta, e)):
        raise DomainError(f"[ERRO] Parâmetros não finitos: α={alpha}, β={beta}, e={e}")
    if beta < 0:
        raise DomainError(f"[ERRO] β deve ser não negativo (β={beta})")
    if strict:
        if not 0.0 <= e < 1.0:
            raise DomainError(f"[ERRO] Excentricidade fora de [0, 1): e={e}")
        if alpha <= 0 or alpha < beta:
            raise DomainError(f"[ERRO] Exige-se α ≥ β e α > 0: α={alpha}, β={beta}")
    elif not -1.0 < e < 1.0:
        raise DomainError(f"[ERRO] Excentricidade fora de (−1, 1): e={e}")

    at, bt = to_tilde(alpha, beta)
    return EssentialParams(
        alpha=alpha,
        beta=beta,
        e=e,
        lambda3=1.0 + alpha + 3.0 * beta,
        lambda4=1.0 + alpha - 3.0 * beta,
        alpha_tilde=at,
        beta_tilde=bt,
        fronteira=(beta == 0.0),
    )


def make_params_tilde(alpha_tilde: float, beta_tilde: float, e: float, strict: bool = False) -> EssentialParams:
    alpha, beta = from_tilde(alpha_tilde, beta_tilde)
    return make_params(alpha, beta, e, strict=strict)


# ============================================================
# OPERAÇÕES
# ============================================================
def _distancias(geom: LimitGeometry) -> np.ndarray:
    w = geom.primarios() - geom.zstar
    r = np.abs(w)
    if np.any(r < TOL_COLISAO):
        i = int(np.argmin(r)) + 1
        raise CollisionError(f"[ERRO] z* = {geom.zstar} colide com o primário q{i}")
    return r


def alpha_beta_from_geometry(geom: LimitGeometry, masses: MassConfig) -> tuple[float, float]:
    """α = ½ Σ mᵢ/|qᵢ − z*|³ ;  β = ½ |Σ mᵢ (qᵢ − z*)²/|qᵢ − z*|⁵|."""
    r = _distancias(geom)
    w = geom.primarios() - geom.zstar
    m = masses.massas()
    alpha = 0.5 * float(np.sum(m / r**3))
    beta = 0.5 * float(abs(np.sum(m * w**2 / r**5)))
    return alpha, beta


def reduction_coefficients(masses: MassConfig, geom: LimitGeometry) -> ReductionCoefficients:
    if not math.isfinite(masses.alpha0):
        raise DomainError("[ERRO] Coeficientes limite exigem três massas positivas")
    _distancias(geom)
    m1, m2, m3 = masses.m1, masses.m2, masses.m3
    a0, mu0 = masses.alpha0, masses.mu0

    # 1) posições reescalonadas a partir do centro de massa
    q_c = m2 + m3 * Z_L
    a = a0 * (geom.primarios() - q_c)
    a4 = a0 * (geom.zstar - q_c)
    w = a - a4
    r = np.abs(w)
    m = masses.massas()

    # 2) coeficientes
    raiz = math.sqrt(3.0 * m1 * m2 * m3)
    k0 = a0**2 / raiz
    l0 = -complex(m1 * m2 - 0.5 * (m1 + m2) * m3, (math.sqrt(3.0) / 2.0) * (m2 - m1) * m3) / raiz
    beta20 = float(np.sum(m / r**3)) / mu0 - 1.0
    beta110 = 0.75 * complex(3.0 * (m1 + m2) - 2.0, math.sqrt(3.0) * (m2 - m1))
    beta220 = complex(1.5 / mu0 * np.sum(m * w**2 / r**5))
    return ReductionCoefficients(k0, l0, beta20, beta110, 0j, beta220)


def lagrangian_beta(masses: MassConfig) -> float:
    """β_L = 27(m1m2 + m2m3 + m3m1), igual a 27/α0² (0 no limite α0 → ∞)."""
    simetrica = 27.0 * (masses.m1 * masses.m2 + masses.m2 * masses.m3 + masses.m3 * masses.m1)
    via_alpha0 = 0.0 if not math.isfinite(masses.alpha0) else 27.0 / masses.alpha0**2
    if abs(simetrica - via_alpha0) > 1e-12:
        raise DomainError(f"[ERRO] β_L inconsistente: {simetrica} != {via_alpha0}")
    return simetrica
