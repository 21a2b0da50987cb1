# ============================================================
# GALERKIN - ÍNDICE DE MORSE POR DISCRETIZAÇÃO DE FOURIER
# ------------------------------------------------------------
# Objetivo:
#   - Discretizar a forma quadrática do operador
#       𝒜 = −d²/dt² − I + f(t)((1+α)I + 3β S(t)),  f = 1/(1+e cos t)
#     sob a condição x(2π) = ω x(0), ω ∈ {+1, −1}.
#   - Contar autovalores negativos (índice) e nulos (nulidade).
#   - Teste independente de 1-degenerescência pela recorrência
#     de três termos dos coeficientes de Fourier do núcleo.
#
# Coordenadas:
#   - Trabalha-se em y = R(−t)x, onde o operador vira
#       L y = −y'' − 2 J2 y' + f K y,  K = diag(λ3, λ4).
#   - Base ortonormal real: 1/√(2π), cos(kt)/√π, sin(kt)/√π, com k
#     inteiro (ω = 1) ou semi-inteiro (ω = −1).
#   - A matriz separa-se exatamente em dois setores invariantes:
#       setor "a" = {c1·cos kt, c2·sin kt}
#       setor "b" = {c2·cos kt, c1·sin kt}
# ============================================================

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate, linalg

from common import (
    TOL_PADRAO,
    DomainError,
    NotConverged,
    SingularRecurrenceError,
    Tolerancias,
    count_nonpositive_symmetric,
    eigvals_symmetric,
)
from model import EssentialParams, make_params

logger = logging.getLogger(__name__)

SETORES = ("a", "b")


# ============================================================
# TIPOS
# ============================================================
@dataclass(frozen=True)
class GalerkinProblem:
    params: EssentialParams
    omega: int
    N: int
    matrix: np.ndarray
    fcoeffs: np.ndarray
    base: tuple  # (componente, "cos"/"sin", k) por coluna
    setor: Optional[str] = None

    @property
    def dimensao(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class IndexPair:
    index: int
    nullity: int
    converged: bool = True
    N: int = 0

    def como_lista(self) -> list[int]:
        return [self.index, self.nullity]


# ============================================================
# COEFICIENTES DE FOURIER DE f(t) = 1/(1 + e cos t)
# ============================================================
def fourier_f(e: float, order: int) -> np.ndarray:
    """
    f̂_0 … f̂_order com f(t) = f̂_0 + 2 Σ f̂_k cos kt.

    Forma fechada f̂_k = (−r)^k / √(1−e²), r = e / (1 + √(1−e²)),
    válida também para e ∈ (−1, 0).
    """
    if not -1.0 < e < 1.0:
        raise DomainError(f"[ERRO] e fora de (−1, 1): {e}")
    if order < 1:
        raise DomainError(f"[ERRO] ordem deve ser ≥ 1 (ordem = {order})")
    s = math.sqrt(1.0 - e * e)
    r = e / (1.0 + s)
    k = np.arange(order + 1)
    return (-r) ** k / s


def fourier_f_quadrature(e: float, k: int) -> float:
    """Oráculo: (1/2π) ∫ cos(kt)/(1 + e cos t) dt por quadratura adaptativa."""
    valor, _ = integrate.quad(lambda t: math.cos(k * t) / (1.0 + e * math.cos(t)), 0.0, 2.0 * math.pi, limit=200, epsabs=1e-14, epsrel=1e-13)
    return valor / (2.0 * math.pi)


# ============================================================
# MONTAGEM
# ============================================================
def _modos(omega: int, N: int) -> np.ndarray:
    if omega == 1:
        return np.arange(0, N + 1, dtype=float)
    if omega == -1:
        return np.arange(N, dtype=float) + 0.5
    raise DomainError(f"[ERRO] ω deve ser +1 ou −1 (ω = {omega})")


def _base_setor(omega: int, N: int, setor: str) -> list[tuple[int, str, float]]:
    """Funções do setor em ordem de modo: (c_cos, cos k), (c_sin, sin k)."""
    comp_cos, comp_sin = (1, 2) if setor == "a" else (2, 1)
    base = []
    for k in _modos(omega, N):
        base.append((comp_cos, "cos", k))
        if k > 0:
            base.append((comp_sin, "sin", k))
    return base


def _matriz_setor(params: EssentialParams, base, fhat: np.ndarray, setor: str) -> np.ndarray:
    comp = np.array([b[0] for b in base])
    eh_cos = np.array([b[1] == "cos" for b in base])
    k = np.array([b[2] for b in base])
    norma = np.where(k == 0, 1.0 / math.sqrt(2.0 * math.pi), 1.0 / math.sqrt(math.pi))

    # 1) termo f K y: só acopla mesma componente e mesma paridade
    dif = np.rint(np.abs(k[:, None] - k[None, :])).astype(int)
    soma = np.rint(k[:, None] + k[None, :]).astype(int)
    sinal = np.where(eh_cos, 1.0, -1.0)
    kappa = np.where(comp == 1, params.lambda3, params.lambda4)
    mesmo = (comp[:, None] == comp[None, :]) & (eh_cos[:, None] == eh_cos[None, :])
    fterm = math.pi * (fhat[dif] + sinal[:, None] * fhat[soma]) * norma[:, None] * norma[None, :]
    A = np.where(mesmo, kappa[:, None] * fterm, 0.0)

    # 2) termo −y'': k² na diagonal
    A[np.diag_indices_from(A)] += k**2

    # 3) termo −2 J2 y': ±2k entre cos e sin do mesmo modo
    acoplamento = 2.0 if setor == "a" else -2.0
    for i in range(len(base) - 1):
        if base[i][1] == "cos" and base[i + 1][1] == "sin" and base[i][2] == base[i + 1][2]:
            A[i, i + 1] = A[i + 1, i] = acoplamento * base[i][2]

    return 0.5 * (A + A.T)


def assemble(params: EssentialParams, omega: int, N: int, setor: Optional[str] = None) -> GalerkinProblem:
    """
    Matriz da forma ⟨𝒜x, x⟩ na base trigonométrica girada.

    setor=None devolve a matriz completa, bloco-diagonal (setor a, setor b);
    em e = 0 os blocos de cada modo são B_k (setor a) e B̄_k (setor b).
    """
    if N < 8:
        raise DomainError(f"[ERRO] Truncamento N deve ser ≥ 8 (N = {N})")
    fhat = fourier_f(params.e, 2 * N + 1)
    setores = SETORES if setor is None else (setor,)
    blocos, base = [], []
    for s in setores:
        b = _base_setor(omega, N, s)
        blocos.append(_matriz_setor(params, b, fhat, s))
        base.extend(b)
    matriz = linalg.block_diag(*blocos)
    return GalerkinProblem(params, omega, N, matriz, fhat, tuple(base), setor)


def kernel_vector(problem: GalerkinProblem, func: Callable[[np.ndarray], np.ndarray], pontos: Optional[int] = None) -> np.ndarray:
    """
    Projeção de Fourier de y(t) (coordenadas giradas) na base montada.

    func recebe o vetor de tempos e devolve array (2, n). A regra dos
    trapézios periódica é exata para polinômios trigonométricos de grau
    menor que o número de pontos.
    """
    pontos = pontos or 8 * problem.N + 32
    t = np.linspace(0.0, 2.0 * math.pi, pontos, endpoint=False)
    y = np.asarray(func(t))
    dt = 2.0 * math.pi / pontos
    coef = []
    for comp, tipo, k in problem.base:
        norma = 1.0 / math.sqrt(2.0 * math.pi) if k == 0 else 1.0 / math.sqrt(math.pi)
        phi = (np.cos(k * t) if tipo == "cos" else np.sin(k * t)) * norma
        coef.append(float(np.sum(y[comp - 1] * phi) * dt))
    return np.array(coef)


# ============================================================
# ÍNDICE E NULIDADE
# ============================================================
def _contar(problem: GalerkinProblem, tol: float, piso: float) -> tuple[int, int]:
    w = eigvals_symmetric(problem.matrix)
    limiar = max(tol * float(np.max(np.abs(w))), piso)
    indice = int(np.sum(w < -limiar))
    nulidade = int(np.sum(np.abs(w) <= limiar))
    logger.debug(
        "(GALERKIN) - ω=%+d N=%d: índice=%d nulidade=%d (limiar %.2e)",
        problem.omega, problem.N, indice, nulidade, limiar,
    )
    return indice, nulidade


def index_and_nullity(problem: GalerkinProblem, tol: Optional[float] = None,
                      tolerancias: Tolerancias = TOL_PADRAO) -> IndexPair:
    """
    Conta autovalores < −limiar (índice) e em [−limiar, limiar] (nulidade),
    com limiar = max(tol·max|λ|, piso). Repete com N + passo_N e exige
    o mesmo par; caso contrário levanta NotConverged.
    """
    tol = tolerancias.galerkin if tol is None else tol
    primeiro = _contar(problem, tol, tolerancias.galerkin_piso)
    refinado = assemble(problem.params, problem.omega, problem.N + tolerancias.passo_N, problem.setor)
    segundo = _contar(refinado, tol, tolerancias.galerkin_piso)
    if primeiro != segundo:
        raise NotConverged(
            f"[ERRO] Índice de Galerkin instável: N={problem.N} → {primeiro}, "
            f"N={refinado.N} → {segundo} (α={problem.params.alpha}, β={problem.params.beta}, "
            f"e={problem.params.e}, ω={problem.omega})"
        )
    return IndexPair(primeiro[0], primeiro[1], True, problem.N)


def galerkin_indices(params: EssentialParams, omega: int, tolerancias: Tolerancias = TOL_PADRAO,
                     N: Optional[int] = None) -> IndexPair:
    problem = assemble(params, omega, N or tolerancias.N)
    return index_and_nullity(problem, tolerancias=tolerancias)


def count_nonpositive(params: EssentialParams, omega: int, N: int, setor: Optional[str] = None) -> int:
    """i + ν: número de autovalores ≤ 0 (só o subconjunto necessário é calculado)."""
    setores = SETORES if setor is None else (setor,)
    total = 0
    for s in setores:
        total += count_nonpositive_symmetric(assemble(params, omega, N, s).matrix)
    return total


def positivity_kernel_residual(e: float, N: int = 32, c: tuple = (1.0, 0.0)) -> float:
    """
    ‖A v‖ / ‖v‖ para v = projeção de (1 + e cos t)·(c1 cos t + c2 sin t,
    −c1 sin t + c2 cos t) no operador com α = β = 0 e ω = 1.
    """
    params = make_params(0.0, 0.0, e, strict=False)
    problem = assemble(params, 1, N)
    c1, c2 = c

    def y(t):
        escala = 1.0 + e * np.cos(t)
        return np.vstack([escala * (c1 * np.cos(t) + c2 * np.sin(t)),
                          escala * (-c1 * np.sin(t) + c2 * np.cos(t))])

    v = kernel_vector(problem, y)
    return float(np.linalg.norm(problem.matrix @ v) / np.linalg.norm(v))


# ============================================================
# TESTE DO NÚCLEO PELA RECORRÊNCIA
# ------------------------------------------------------------
# Multiplicando L y = 0 por (1 + e cos t), os coeficientes
# w_n = (cos, sin) de cada setor satisfazem
#   B_n w_n − e A_{n−1} w_{n−1} − e A_{n+1} w_{n+1} = 0
# com A_n = −P_n/2 e B_n = P_n + K. A_2 é singular, por isso as
# sementes saem do núcleo de [B_1, −e A_2].
# ============================================================
def _matrizes_recorrencia(params: EssentialParams, setor: str):
    s = 1.0 if setor == "a" else -1.0
    kdiag = (params.lambda3, params.lambda4) if setor == "a" else (params.lambda4, params.lambda3)

    def P(n):
        return np.array([[n * n, s * 2.0 * n], [s * 2.0 * n, n * n]])

    def B(n):
        return P(n) + np.diag(kdiag)

    def A(n):
        return -0.5 * P(n)

    return A, B, kdiag[0]


def _terminal_setor(params: EssentialParams, setor: str, N: int) -> float:
    """σ_min/σ_max da matriz terminal [w_N¹, w_N²] com colunas normalizadas."""
    A, B, _ = _matrizes_recorrencia(params, setor)
    e = params.e
    sementes = linalg.null_space(np.hstack([B(1), -e * A(2)]))
    if sementes.shape[1] != 2:
        raise SingularRecurrenceError(
            f"[ERRO] Núcleo de [B1, −eA2] com dimensão {sementes.shape[1]} "
            f"(α={params.alpha}, β={params.beta}, e={e})"
        )
    finais = []
    for j in range(2):
        anterior, atual = sementes[:2, j], sementes[2:, j]
        for n in range(2, N):
            proximo = linalg.solve(e * A(n + 1), B(n) @ atual - e * A(n - 1) @ anterior)
            escala = np.linalg.norm(proximo)
            anterior, atual = atual / escala, proximo / escala
        finais.append(atual / np.linalg.norm(atual))
    s = linalg.svdvals(np.column_stack(finais))
    return float(s[-1] / s[0])


def kernel_recurrence_test(params: EssentialParams, maxN: int = 64, tol: float = 1e-6) -> str:
    """
    Veredito independente de 1-degenerescência para e > 0:
    "degenerate-1", "nondegenerate" ou "inconclusive".

    Existe solução de quadrado somável quando alguma combinação das
    sementes cancela as duas direções crescentes, isto é, quando a
    matriz terminal é singular. O veredito precisa coincidir em maxN
    e maxN − 8.
    """
    if params.e <= 0:
        raise DomainError(f"[ERRO] Teste da recorrência exige e > 0 (e = {params.e})")
    if maxN < 32:
        raise DomainError(f"[ERRO] maxN deve ser ≥ 32 (maxN = {maxN})")
    # termo constante livre quando λ3 ou λ4 zera
    if min(abs(params.lambda3), abs(params.lambda4)) < tol:
        return "degenerate-1"

    def veredito(N: int) -> str:
        s = min(_terminal_setor(params, setor, N) for setor in SETORES)
        logger.debug("(GALERKIN) - recorrência N=%d: s=%.3e", N, s)
        if s < tol:
            return "degenerate-1"
        if s > 1e3 * tol:
            return "nondegenerate"
        return "inconclusive"

    v1, v2 = veredito(maxN), veredito(maxN - 8)
    return v1 if v1 == v2 else "inconclusive"
