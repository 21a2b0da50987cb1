# ============================================================
# SYMPL - ÁLGEBRA LINEAR SIMPLÉTICA EM Sp(4)
# ------------------------------------------------------------
# Objetivo:
#   - Nulidades ν_ω(M) = dim ker(M − ωI) por SVD no subespaço
#     invariante (Schur reordenada) dos autovalores próximos de ω.
#   - Sinais de Krein dos autovetores no círculo unitário.
#   - Rotulagem da monodromia em formas normais básicas
#     (R, D, N1, ±I2, N2, M2, quádrupla hiperbólica complexa).
#   - Números de desdobramento (S⁺, S⁻) por bloco, com aditividade,
#     fórmula do índice por desdobramento e iteração de Bott.
# ============================================================

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy import linalg

from common import (
    TOL_PADRAO,
    DegenerateKreinError,
    DomainError,
    Tolerancias,
    UnresolvedClassError,
    cluster_subspace,
    eig_dense,
    null_basis,
)
from essential import J4

logger = logging.getLogger(__name__)

DOIS_PI = 2.0 * math.pi
ORDEM_TIPOS = {"I2": 0, "N1": 1, "M2": 2, "R": 3, "N2": 4, "D": 5, "QH": 6}
DIMENSAO_TIPOS = {"I2": 2, "N1": 2, "R": 2, "D": 2, "N2": 4, "M2": 4, "QH": 4}
RAIO_MAXIMO_NUCLEO = 1e-2


# ============================================================
# TIPOS
# ============================================================
@dataclass(frozen=True)
class Bloco:
    """
    Bloco básico de forma normal.

    tipo : "R", "D", "N1", "I2", "N2", "M2" ou "QH"
    valor: autovalor que localiza o bloco (±1, e^{iθ}, λ real ou complexo)
    angulo: θ ∈ (0, 2π) para R e N2
    sinal: b de N1(±1, b); para N2, +1 não trivial e −1 trivial
    """

    tipo: str
    valor: complex
    angulo: Optional[float] = None
    sinal: int = 0

    @property
    def dimensao(self) -> int:
        return DIMENSAO_TIPOS[self.tipo]

    def rotulo(self) -> str:
        w = int(round(self.valor.real)) if self.tipo in ("I2", "N1", "M2") else None
        if self.tipo == "I2":
            return "I2" if w == 1 else "-I2"
        if self.tipo == "N1":
            return f"N1({w},{self.sinal})"
        if self.tipo == "M2":
            return f"M2({w})"
        if self.tipo == "R":
            return f"R({self.angulo:.6f})"
        if self.tipo == "N2":
            tipo = "nontrivial" if self.sinal > 0 else "trivial"
            return f"N2({self.angulo:.6f},{tipo})"
        if self.tipo == "D":
            return f"D({self.valor.real:.6g})"
        return f"hyperbolic-complex-quadruple({self.valor.real:.6g}{self.valor.imag:+.6g}j)"

    def chave(self):
        return (ORDEM_TIPOS[self.tipo], round(self.valor.real, 9), round(self.valor.imag, 9), self.sinal)


@dataclass(frozen=True)
class SpectrumClass:
    label: str
    blocos: tuple
    espectro: np.ndarray
    krein_signs: tuple = ()
    nulidades: dict = field(default_factory=dict)

    @property
    def angulos(self) -> list[float]:
        return sorted(b.angulo for b in self.blocos if b.tipo == "R")

    @property
    def multiplicadores(self) -> list[float]:
        return [b.valor.real for b in self.blocos if b.tipo == "D"]

    @property
    def semissimples(self) -> bool:
        return not any(b.tipo in ("N1", "N2", "M2") for b in self.blocos)

    @property
    def dimensao_no_circulo(self) -> int:
        return sum(b.dimensao for b in self.blocos if b.tipo not in ("D", "QH"))

    @property
    def tem_raiz_real_unitaria(self) -> bool:
        return any(b.tipo in ("I2", "N1", "M2") for b in self.blocos)

    def krein_definido(self) -> bool:
        """Autovalores repetidos no círculo carregam sinal de Krein único."""
        por_ponto: dict = {}
        for b in self.blocos:
            if b.tipo == "R":
                chave = round(math.cos(b.angulo), 7)
                por_ponto.setdefault(chave, set()).add(b.angulo < math.pi)
        return all(len(s) == 1 for s in por_ponto.values())


@dataclass(frozen=True)
class SplittingPair:
    omega: complex
    s_plus: int
    s_minus: int

    def __add__(self, outro: "SplittingPair") -> "SplittingPair":
        return SplittingPair(self.omega, self.s_plus + outro.s_plus, self.s_minus + outro.s_minus)


# ============================================================
# NULIDADE E KREIN
# ============================================================
def _escala(M: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(M, 2)))


def _nucleo(M: np.ndarray, omega: complex, tol: float, raio: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Base ortonormal de ker(M − ωI) procurada só no subespaço invariante
    dos autovalores a menos de `raio` de ω.

    Retorna (base do núcleo, Z1, coordenadas do núcleo em Z1). O limiar
    dos valores singulares de T11 − ωI é tol·max(1, ‖M‖₂), o nível de
    ruído de M; direções de multiplicadores hiperbólicos grandes ficam
    fora do subespaço e nunca contam.
    """
    Z1, T11 = cluster_subspace(M, omega, raio)
    if Z1.shape[1] == 0:
        return np.zeros((M.shape[0], 0)), Z1, np.zeros((0, 0))
    A11 = T11 - omega * np.eye(T11.shape[0])
    if Z1.dtype.kind != "c":
        A11 = A11.real
    K = null_basis(A11, tol, _escala(M))
    return Z1 @ K, Z1, K


def nullity(M: np.ndarray, omega: complex, tol: float = TOL_PADRAO.svd,
            raio: Optional[float] = None) -> int:
    """
    dim ker(M − ωI), contada no subespaço dos autovalores a menos de
    `raio` de ω. Sem `raio`, usa √(tol·‖M‖₂) limitado a [1e-4, 1e-2]:
    o afastamento de um bloco de Jordan perturbado no nível de ruído.
    """
    if abs(abs(omega) - 1.0) > 1e-12:
        raise DomainError(f"[ERRO] ω deve estar no círculo unitário (|ω| = {abs(omega)})")
    if raio is None:
        raio = min(max(TOL_PADRAO.jordan, math.sqrt(tol * _escala(M))), RAIO_MAXIMO_NUCLEO)
    return int(_nucleo(M, complex(omega), tol, raio)[0].shape[1])


def _forma_krein(V: np.ndarray) -> np.ndarray:
    """Matriz hermitiana −i·Vᴴ J V (forma de Krein na base V)."""
    H = -1j * (V.conj().T @ J4 @ V)
    return 0.5 * (H + H.conj().T)


def krein_sign(M: np.ndarray, omega: complex, tolerancias: Tolerancias = TOL_PADRAO) -> list[int]:
    """
    Sinais da forma x ↦ Im(xᴴ J x) no autoespaço de ω (um por direção).

    A forma é diagonalizada numa base ortonormal do autoespaço; um
    autovalor de módulo abaixo de `krein` indica colisão de Krein.
    """
    if abs(omega.imag) < 1e-12:
        raise DomainError(f"[ERRO] Sinal de Krein exige ω não real (ω = {omega})")
    V = _nucleo(M, complex(omega), tolerancias.svd, tolerancias.jordan)[0]
    if V.shape[1] == 0:
        raise DomainError(f"[ERRO] ω = {omega} não é autovalor da matriz")
    autovalores = linalg.eigvalsh(_forma_krein(V))
    if np.min(np.abs(autovalores)) < tolerancias.krein:
        raise DegenerateKreinError(
            f"[ERRO] Forma de Krein degenerada em ω = {omega}: {autovalores}"
        )
    return sorted(int(np.sign(x)) for x in autovalores)


# ============================================================
# CLASSIFICAÇÃO
# ============================================================
def _aglomerar(valores: Iterable[complex], raio: float) -> list[list[complex]]:
    grupos: list[list[complex]] = []
    for v in valores:
        for g in grupos:
            if abs(v - np.mean(g)) < raio:
                g.append(v)
                break
        else:
            grupos.append([v])
    return grupos


def _sinais_jordan(M: np.ndarray, omega: int, quantos: int, tol: Tolerancias) -> list[int]:
    """Sinais b dos blocos N1(ω, b): forma u ↦ uᵀJ(M − ωI)u no subespaço invariante do aglomerado em ω."""
    A = M - omega * np.eye(4)
    G = cluster_subspace(M, float(omega), tol.jordan)[0]
    F = G.T @ J4 @ A @ G
    w = linalg.eigvalsh(0.5 * (F + F.T))
    maiores = sorted(w, key=lambda x: -abs(x))[:quantos]
    return sorted((int(np.sign(x)) for x in maiores), reverse=True)


def _blocos_raiz_real(M, omega, g, tol) -> Optional[list[Bloco]]:
    nu = nullity(M, complex(omega), tol.svd, tol.jordan)
    w = complex(omega)
    if g == 2:
        if nu == 2:
            return [Bloco("I2", w)]
        if nu == 1:
            (b,) = _sinais_jordan(M, omega, 1, tol)
            return [Bloco("N1", w, sinal=b)]
        return None
    if g == 4:
        if nu == 4:
            return [Bloco("I2", w), Bloco("I2", w)]
        if nu == 3:
            (b,) = _sinais_jordan(M, omega, 1, tol)
            return [Bloco("I2", w), Bloco("N1", w, sinal=b)]
        if nu == 2:
            return [Bloco("N1", w, sinal=b) for b in _sinais_jordan(M, omega, 2, tol)]
        if nu == 1:
            return [Bloco("M2", w)]
        return None
    raise UnresolvedClassError(f"[ERRO] Aglomerado de multiplicidade ímpar ({g}) em {omega}")


def _sinal_unico(M, omega, tol) -> int:
    try:
        sinais = krein_sign(M, omega, tol)
    except DegenerateKreinError as exc:
        raise UnresolvedClassError(str(exc)) from exc
    if len(sinais) != 1:
        raise UnresolvedClassError(f"[ERRO] Autovalor simples {omega} com autoespaço de dimensão {len(sinais)}")
    return sinais[0]


def _blocos_circulo(M, omega, g, tol) -> list[Bloco]:
    """Blocos de um autovalor não real ω (Im ω > 0) no círculo unitário."""
    theta = cmath.phase(omega) % DOIS_PI
    if g == 1:
        s = _sinal_unico(M, omega, tol)
        return [Bloco("R", cmath.exp(1j * _angulo(theta, s)), angulo=_angulo(theta, s))]

    V, Z1, K = _nucleo(M, complex(omega), tol.svd, tol.jordan)
    nu = V.shape[1]
    if nu == 2:
        try:
            sinais = krein_sign(M, omega, tol)
        except DegenerateKreinError as exc:
            raise UnresolvedClassError(str(exc)) from exc
        return [Bloco("R", cmath.exp(1j * _angulo(theta, s)), angulo=_angulo(theta, s)) for s in sinais]
    if nu == 1:
        # cadeia de Jordan (M − ωI)u = v resolvida dentro do aglomerado
        A11 = Z1.conj().T @ M @ Z1 - omega * np.eye(Z1.shape[1])
        u = Z1 @ linalg.lstsq(A11, K[:, 0])[0]
        v = V[:, 0]
        Q = float(np.imag(u.conj() @ J4 @ v))
        if abs(Q) < tol.krein:
            raise UnresolvedClassError(f"[ERRO] Cadeia de Jordan sem sinal definido em ω = {omega}")
        sinal = -1 if Q * omega.imag < 0 else 1
        return [Bloco("N2", omega, angulo=theta, sinal=sinal)]
    raise UnresolvedClassError(f"[ERRO] Autovalor duplo em {omega} com nulidade {nu}")


def _angulo(theta: float, sinal: int) -> float:
    return theta if sinal > 0 else DOIS_PI - theta


def _blocos_individuais(M, valores, tol) -> list[Bloco]:
    blocos = []
    for lam in valores:
        if lam.imag < 0:
            continue
        no_circulo = abs(abs(lam) - 1.0) < tol.circulo
        if lam.imag == 0:
            if no_circulo:
                raise UnresolvedClassError(f"[ERRO] Autovalor real {lam} indistinguível de ±1")
            if abs(lam) > 1:
                blocos.append(Bloco("D", complex(lam.real, 0.0)))
        elif no_circulo:
            blocos.extend(_blocos_circulo(M, lam, 1, tol))
        elif abs(lam) > 1:
            blocos.append(Bloco("QH", lam))
    return blocos


def classify(M: np.ndarray, tolerancias: Tolerancias = TOL_PADRAO) -> SpectrumClass:
    """
    Rótulo determinístico a partir de autovalores, multiplicidades
    geométricas e sinais de Krein.

    1) aglomera autovalores a menos de `jordan` de ±1; a média deve
       ficar a `raiz_unidade` de ±1 e a nulidade vem da SVD;
    2) autovalores não reais no círculo: R(θ) pelo sinal de Krein,
       ou N2 quando a colisão é não semissimples;
    3) fora do círculo: D(λ) com |λ| > 1 ou quádrupla complexa.
    """
    tol = tolerancias
    espectro = eig_dense(M)[0]
    blocos: list[Bloco] = []
    restantes = list(espectro)

    # 1) aglomerados em ±1
    for omega in (1, -1):
        proximos = [z for z in restantes if abs(z - omega) < tol.jordan]
        if not proximos:
            continue
        media = complex(np.mean(proximos))
        if abs(media - omega) > tol.raiz_unidade:
            raise UnresolvedClassError(
                f"[ERRO] Aglomerado em {omega} com média {media} fora de {tol.raiz_unidade}"
            )
        novos = _blocos_raiz_real(M, omega, len(proximos), tol)
        if novos is None:
            # nulidade zero: par próximo de ±1 resolvido autovalor a autovalor
            continue
        blocos.extend(novos)
        restantes = [z for z in restantes if abs(z - omega) >= tol.jordan]

    # 2) e 3) demais autovalores no semiplano superior ou reais
    superiores = [z for z in restantes if z.imag > 0]
    for grupo in _aglomerar(superiores, tol.jordan):
        media = complex(np.mean(grupo))
        if len(grupo) == 2 and abs(abs(media) - 1.0) < tol.circulo:
            nu = _nucleo(M, media, tol.svd, tol.jordan)[0].shape[1]
            if nu > 0:
                blocos.extend(_blocos_circulo(M, media, 2, tol))
                continue
        blocos.extend(_blocos_individuais(M, grupo, tol))
    blocos.extend(_blocos_individuais(M, [z for z in restantes if z.imag == 0], tol))

    if sum(b.dimensao for b in blocos) != 4:
        raise UnresolvedClassError(
            f"[ERRO] Blocos não cobrem Sp(4): {[b.rotulo() for b in blocos]}; espectro {espectro}"
        )

    blocos.sort(key=Bloco.chave)
    sinais = tuple((b.angulo, 1 if b.angulo < math.pi else -1) for b in blocos if b.tipo == "R")
    nulidades = {w: nullity(M, complex(w), tol.svd, tol.jordan) for w in (1, -1)}
    label = "⋄".join(b.rotulo() for b in blocos)
    logger.debug("(SYMPL) - classificação: %s", label)
    return SpectrumClass(label, tuple(blocos), espectro, sinais, nulidades)


# ============================================================
# NÚMEROS DE DESDOBRAMENTO
# ============================================================
def _desdobramento_bloco(b: Bloco, omega: complex, tol: float) -> tuple[int, int]:
    if b.tipo in ("D", "QH"):
        return 0, 0
    if b.tipo in ("I2", "N1", "M2"):
        if abs(omega - b.valor) > tol:
            return 0, 0
        if b.tipo == "N1":
            w = int(round(b.valor.real))
            # N1(1, −1) e N1(−1, 1) têm desdobramento nulo
            return (0, 0) if b.sinal == -w else (1, 1)
        return 1, 1
    if b.tipo == "R":
        if abs(omega - b.valor) <= tol:
            return 0, 1
        if abs(omega - b.valor.conjugate()) <= tol:
            return 1, 0
        return 0, 0
    # N2
    if abs(omega - b.valor) <= tol or abs(omega - b.valor.conjugate()) <= tol:
        return (1, 1) if b.sinal > 0 else (0, 0)
    return 0, 0


def splitting_numbers(cls: SpectrumClass, omega: complex, tol: float = 1e-6) -> SplittingPair:
    total = SplittingPair(omega, 0, 0)
    for b in cls.blocos:
        sp, sm = _desdobramento_bloco(b, omega, tol)
        total = total + SplittingPair(omega, sp, sm)
    return total


def unit_eigenvalues(cls: SpectrumClass) -> list[complex]:
    """Pontos distintos de σ(M) ∩ U, em ordem anti-horária a partir de 1."""
    pontos: list[complex] = []
    for b in cls.blocos:
        if b.tipo in ("I2", "N1", "M2"):
            candidatos = [b.valor]
        elif b.tipo in ("R", "N2"):
            candidatos = [b.valor, b.valor.conjugate()]
        else:
            candidatos = []
        for z in candidatos:
            if all(abs(z - p) > 1e-9 for p in pontos):
                pontos.append(z)
    return sorted(pontos, key=lambda z: cmath.phase(z) % DOIS_PI)


def index_from_splitting(i1: int, cls: SpectrumClass, omega0: complex) -> int:
    """
    i_ω0 = i_1 + S⁺(1) + Σ_j (−S⁻(ω_j) + S⁺(ω_j)) − S⁻(ω0),
    com ω_j os autovalores unitários estritamente entre 1 e ω0
    no sentido anti-horário.
    """
    theta0 = cmath.phase(omega0) % DOIS_PI
    if abs(omega0 - 1) < 1e-12:
        return int(i1)
    total = int(i1) + splitting_numbers(cls, 1 + 0j).s_plus
    for z in unit_eigenvalues(cls):
        ang = cmath.phase(z) % DOIS_PI
        if 1e-9 < ang < theta0 - 1e-9:
            sp = splitting_numbers(cls, z)
            total += sp.s_plus - sp.s_minus
    return total - splitting_numbers(cls, omega0).s_minus


def bott_iterate_index(pares: dict, m: int) -> tuple[int, int]:
    """
    Índice e nulidade em ω = 1 do iterado γ^m para m ∈ {1, 2}:
    i_1(γ²) = i_1(γ) + i_{−1}(γ) e ν_1(γ²) = ν_1(γ) + ν_{−1}(γ).

    `pares` mapeia ω ∈ {1, −1} em (índice, nulidade).
    """
    if m == 1:
        return tuple(pares[1])
    if m == 2:
        return pares[1][0] + pares[-1][0], pares[1][1] + pares[-1][1]
    raise DomainError(f"[ERRO] Iteração de Bott implementada só para m ∈ {{1, 2}} (m = {m})")
