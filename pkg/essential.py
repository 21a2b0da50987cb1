# ============================================================
# ESSENTIAL - SISTEMA LINEARIZADO ESSENCIAL E MONODROMIA
# ------------------------------------------------------------
# Objetivo:
#   - Montar a matriz de coeficientes B(t) do sistema ξ' = J·B(t)·ξ.
#   - Integrar a solução fundamental em [0, 2π] (DOP853 sobre a
#     matriz de transição de 16 componentes) e devolver a matriz
#     de monodromia com espectro e resíduo simplético.
#   - Oráculos em e = 0: exponencial de matriz e espectro em forma
#     fechada a partir de λ⁴ + (2−2α)λ² + (1+α)² − 9β².
# ============================================================

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.integrate import solve_ivp

from common import TOL_PADRAO, DomainError, IntegrationError, Tolerancias, eig_dense
from model import EssentialParams

logger = logging.getLogger(__name__)

J4 = np.array(
    [
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
)
DOIS_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MonodromyResult:
    params: EssentialParams
    M: np.ndarray
    symplectic_residual: float
    spectrum: np.ndarray
    tol: float
    passos: int
    avaliacoes: int
    desvio_quadruplas: float
    determinante: float
    simpletico_ok: bool = True
    metodo: str = "DOP853"
    extras: dict = field(default_factory=dict)


# ============================================================
# COEFICIENTES
# ============================================================
def assemble_B(params: EssentialParams, t: float) -> np.ndarray:
    f = 1.0 / (1.0 + params.e * math.cos(t))
    return np.array(
        [
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, -1.0, 0.0],
            [0.0, -1.0, 1.0 - params.lambda3 * f, 0.0],
            [1.0, 0.0, 0.0, 1.0 - params.lambda4 * f],
        ]
    )


def _campo_stm(t, x, params):
    # ξ' = J B(t) ξ, com ξ armazenada em ordem de colunas (como no CR3BP)
    A = J4 @ assemble_B(params, t)
    phi = np.reshape(x, (4, 4), order="F")
    return np.reshape(A @ phi, 16, order="F")


def symplectic_residual(M: np.ndarray) -> float:
    """‖MᵀJM − J‖∞ relativo a max(1, ‖M‖∞²)."""
    bruto = np.linalg.norm(M.T @ J4 @ M - J4, ord=np.inf)
    escala = max(1.0, np.linalg.norm(M, ord=np.inf) ** 2)
    return float(bruto / escala)


def quadruple_mismatch(espectro: np.ndarray) -> float:
    """Maior desvio relativo entre λ e o recíproco mais próximo no espectro."""
    pior = 0.0
    for lam in espectro:
        inv = 1.0 / lam
        d = np.min(np.abs(espectro - inv)) / max(1.0, abs(inv))
        pior = max(pior, float(d))
    return pior


def _resultado(params, M, tol, passos, avaliacoes, metodo, tolerancias):
    espectro = eig_dense(M)[0]
    residuo = symplectic_residual(M)
    ok = residuo < tolerancias.simpletico
    if not ok:
        logger.warning(
            "(ESSENTIAL) - resíduo simplético %.3e acima do limite %.1e em α=%s, β=%s, e=%s",
            residuo, tolerancias.simpletico, params.alpha, params.beta, params.e,
        )
    return MonodromyResult(
        params=params,
        M=M,
        symplectic_residual=residuo,
        spectrum=espectro,
        tol=tol,
        passos=passos,
        avaliacoes=avaliacoes,
        desvio_quadruplas=quadruple_mismatch(espectro),
        determinante=float(np.linalg.det(M)),
        simpletico_ok=ok,
        metodo=metodo,
    )


# ============================================================
# MONODROMIA
# ============================================================
def monodromy(params: EssentialParams, tol: float | None = None,
              tolerancias: Tolerancias = TOL_PADRAO) -> MonodromyResult:
    """
    Integra a solução fundamental ξ(t), ξ(0) = I4, até t = 2π.

    rtol = tol e atol = tol·1e-2. Excentricidades acima de
    tolerancias.e_max são recusadas com IntegrationError.
    """
    tol = tolerancias.integracao if tol is None else float(tol)
    if not 1e-13 <= tol <= 1e-6:
        raise DomainError(f"[ERRO] Tolerância de integração fora de [1e-13, 1e-6]: {tol}")
    if abs(params.e) > tolerancias.e_max:
        raise IntegrationError(
            f"[ERRO] e = {params.e} acima do limite do integrador ({tolerancias.e_max})"
        )

    x0 = np.reshape(np.eye(4), 16, order="F")
    sol = solve_ivp(
        _campo_stm, (0.0, DOIS_PI), x0, method="DOP853",
        args=(params,), rtol=tol, atol=tol * 1e-2,
    )
    if not sol.success:
        raise IntegrationError(f"[ERRO] Integração falhou em {params}: {sol.message}")

    M = np.reshape(sol.y[:, -1], (4, 4), order="F")
    logger.debug(
        "(ESSENTIAL) - monodromia α=%.6g β=%.6g e=%.4g: %d passos, %d avaliações",
        params.alpha, params.beta, params.e, sol.t.size - 1, sol.nfev,
    )
    return _resultado(params, M, tol, sol.t.size - 1, int(sol.nfev), "DOP853", tolerancias)


def monodromy_e0_exact(params: EssentialParams, tolerancias: Tolerancias = TOL_PADRAO) -> MonodromyResult:
    """exp(2π·J·B) para e = 0 (B constante)."""
    if params.e != 0.0:
        raise DomainError(f"[ERRO] Exponencial exata só vale em e = 0 (e = {params.e})")
    M = linalg.expm(DOIS_PI * (J4 @ assemble_B(params, 0.0)))
    return _resultado(params, M, 0.0, 0, 0, "expm", tolerancias)


def monodromy_iterate(result: MonodromyResult, m: int) -> np.ndarray:
    if m < 1:
        raise DomainError(f"[ERRO] Iterado exige m ≥ 1 (m = {m})")
    return np.linalg.matrix_power(result.M, int(m))


def closed_form_exponents_e0(alpha: float, beta: float) -> np.ndarray:
    """Raízes λ de λ⁴ + (2−2α)λ² + (1+α)² − 9β² (λ² = α − 1 ± √(9β² − 4α))."""
    raiz_disc = np.sqrt(complex(9.0 * beta * beta - 4.0 * alpha))
    quadrados = np.array([alpha - 1.0 + raiz_disc, alpha - 1.0 - raiz_disc])
    lam = np.sqrt(quadrados.astype(complex))
    return np.concatenate([lam, -lam])


def closed_form_spectrum_e0(alpha: float, beta: float) -> np.ndarray:
    """Multiplicadores ρ = exp(2πλ) em e = 0."""
    return np.exp(DOIS_PI * closed_form_exponents_e0(alpha, beta))


def spectrum_distance(a: np.ndarray, b: np.ndarray) -> float:
    """
    Distância entre multiconjuntos de 4 autovalores: emparelhamento
    guloso pelo mais próximo, erro relativo a max(1, |λ|).
    """
    restantes = list(np.asarray(b, dtype=complex))
    pior = 0.0
    for lam in sorted(np.asarray(a, dtype=complex), key=lambda z: -abs(z)):
        dist = [abs(lam - mu) / max(1.0, abs(lam)) for mu in restantes]
        j = int(np.argmin(dist))
        pior = max(pior, float(dist[j]))
        restantes.pop(j)
    return pior
