# ============================================================
# COMMON - UTILITÁRIOS NUMÉRICOS COMPARTILHADOS
# ------------------------------------------------------------
# Objetivo:
#   - Concentrar as exceções do projeto, as tolerâncias padrão
#     e as rotinas numéricas usadas por todos os módulos:
#     bissecção com contrato explícito, posto/nulidade por SVD,
#     autovalores simétricos e não simétricos, diferenças finitas.
#
# Saída esperada:
#   - Funções puras, seguras para chamadas em paralelo.
# ============================================================

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, fields, replace
from typing import Callable, Optional

import numpy as np
from scipy import linalg

logger = logging.getLogger(__name__)


# ============================================================
# EXCEÇÕES
# ------------------------------------------------------------
# Domínio inválido herda de ValueError; falha numérica herda de
# RuntimeError. A CLI converte cada família em código de saída.
# ============================================================
class DomainError(ValueError):
    """Parâmetros fora do domínio de validade."""


class CollisionError(DomainError):
    """Corpo sem massa coincide com um primário."""


class MassRangeError(DomainError):
    """Massa induzida fora de (0, 1/2)."""


class NumericalError(RuntimeError):
    """Falha numérica genérica (não convergência, ambiguidade)."""


class IntegrationError(NumericalError):
    pass


class NotConverged(NumericalError):
    pass


class UnresolvedClassError(NumericalError):
    pass


class DegenerateKreinError(NumericalError):
    pass


class SingularRecurrenceError(NumericalError):
    pass


class BracketError(NumericalError):
    pass


class DegenerateBracket(BracketError):
    pass


class RootCountError(NumericalError):
    pass


# ============================================================
# TOLERÂNCIAS PADRÃO
# ============================================================
@dataclass(frozen=True)
class Tolerancias:
    """
    Todas as tolerâncias numéricas do projeto, com valores padrão.

    integracao   : rtol da monodromia (atol = integracao * 1e-2)
    e_max        : excentricidade máxima aceita pelo integrador
    simpletico   : limite do resíduo simplético relativo
    raiz_unidade : distância máxima da média de um aglomerado a ±1
    jordan       : raio de aglomeração de autovalores próximos
    circulo      : distância máxima de |λ| a 1 para "no círculo"
    svd          : limiar relativo das nulidades por SVD
    krein        : módulo mínimo da forma de Krein
    galerkin     : limiar relativo da nulidade de Galerkin
    galerkin_piso: piso absoluto do limiar de Galerkin
    fronteira    : faixa de fronteira dos testes de sinal em e = 0
    N, passo_N   : truncamento de Fourier e incremento de convergência
    beta_teto    : teto de β nas bissecções de curvas
    resolucao    : largura final das bissecções de curvas
    passo_e      : passo de continuação em e
    """

    integracao: float = 1e-12
    e_max: float = 0.99
    simpletico: float = 1e-9
    raiz_unidade: float = 1e-7
    jordan: float = 1e-4
    circulo: float = 1e-6
    svd: float = 1e-8
    krein: float = 1e-8
    galerkin: float = 1e-8
    galerkin_piso: float = 1e-10
    fronteira: float = 1e-10
    N: int = 64
    passo_N: int = 8
    beta_teto: float = 100.0
    resolucao: float = 1e-10
    passo_e: float = 0.01

    @classmethod
    def de_dicionario(cls, valores: Optional[dict]) -> "Tolerancias":
        """Constrói a partir de um dicionário, rejeitando chaves desconhecidas."""
        valores = dict(valores or {})
        conhecidas = {f.name: f.type for f in fields(cls)}
        desconhecidas = sorted(set(valores) - set(conhecidas))
        if desconhecidas:
            raise DomainError(f"[ERRO] Tolerâncias desconhecidas: {desconhecidas}")
        base = cls()
        convertidos = {}
        for chave, valor in valores.items():
            atual = getattr(base, chave)
            convertidos[chave] = int(valor) if isinstance(atual, int) else float(valor)
        return replace(base, **convertidos)

    def como_dicionario(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


TOL_PADRAO = Tolerancias()


# ============================================================
# BISSECÇÃO
# ============================================================
@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    @property
    def degenerado(self) -> bool:
        return not (self.f_lo * self.f_hi < 0)

    @property
    def largura(self) -> float:
        return self.hi - self.lo


def make_bracket(f: Callable[[float], float], lo: float, hi: float) -> Bracket:
    if not lo < hi:
        raise DegenerateBracket(f"[ERRO] Intervalo vazio: lo={lo}, hi={hi}")
    return Bracket(lo, hi, float(f(lo)), float(f(hi)))


def max_iteracoes(bracket: Bracket, xtol: float) -> int:
    return int(math.ceil(math.log2(max(bracket.largura / xtol, 1.0)))) + 2


def bisect(f: Callable[[float], float], bracket: Bracket, xtol: float) -> Bracket:
    """
    Bissecção clássica que nunca avalia f fora de [lo, hi].

    Retorna o intervalo final (lo, hi) com |hi - lo| <= xtol e
    f(lo)·f(hi) < 0. Funciona também para funções em degrau
    (por exemplo, contagens de autovalores), pois só usa o sinal.
    """
    if xtol <= 0:
        raise DomainError(f"[ERRO] xtol deve ser positivo (xtol={xtol})")
    if bracket.degenerado:
        raise DegenerateBracket(
            f"[ERRO] Sem troca de sinal em [{bracket.lo}, {bracket.hi}]: "
            f"f_lo={bracket.f_lo}, f_hi={bracket.f_hi}"
        )

    lo, hi, f_lo, f_hi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    for _ in range(max_iteracoes(bracket, xtol)):
        if hi - lo <= xtol:
            break
        meio = lo + 0.5 * (hi - lo)
        f_meio = float(f(meio))
        if f_meio == 0.0 or f_meio * f_lo > 0:
            # zero exato fica do lado "hi": o degrau pertence ao ponto de salto
            if f_meio == 0.0:
                hi, f_hi = meio, f_meio
            else:
                lo, f_lo = meio, f_meio
        else:
            hi, f_hi = meio, f_meio
    return Bracket(lo, hi, f_lo, f_hi)


def bisect_root(f: Callable[[float], float], bracket: Bracket, xtol: float) -> float:
    final = bisect(f, bracket, xtol)
    return 0.5 * (final.lo + final.hi)


def bisect_predicate(pred: Callable[[float], bool], lo: float, hi: float, xtol: float) -> Bracket:
    """Localiza a transição False -> True de um predicado monótono em [lo, hi]."""
    def sinal(x: float) -> float:
        return 1.0 if pred(x) else -1.0

    return bisect(sinal, make_bracket(sinal, lo, hi), xtol)


def scan_sign_changes(f: Callable[[float], float], lo: float, hi: float, passo: float) -> list[Bracket]:
    """Varre [lo, hi] com passo fixo e devolve todos os intervalos com troca de sinal."""
    n = max(int(math.ceil((hi - lo) / passo)), 1)
    xs = np.linspace(lo, hi, n + 1)
    valores = [float(f(x)) for x in xs]
    brackets = []
    for i in range(n):
        if valores[i] * valores[i + 1] < 0:
            brackets.append(Bracket(float(xs[i]), float(xs[i + 1]), valores[i], valores[i + 1]))
    return brackets


# ============================================================
# ÁLGEBRA LINEAR
# ------------------------------------------------------------
# Decisões de posto sempre por valores singulares com limiar
# relativo, nunca pelo sinal de um determinante.
# ============================================================
def null_dimension(A: np.ndarray, tol_rel: float, escala: Optional[float] = None) -> int:
    """Dimensão do núcleo de A: valores singulares <= tol_rel·escala."""
    s = linalg.svdvals(A)
    escala = float(escala) if escala is not None else max(float(s[0]) if s.size else 0.0, 1.0)
    return int(np.sum(s <= tol_rel * escala))


def null_basis(A: np.ndarray, tol_rel: float, escala: Optional[float] = None) -> np.ndarray:
    """Base ortonormal (colunas) do núcleo numérico de A."""
    _, s, vh = linalg.svd(A)
    escala = float(escala) if escala is not None else max(float(s[0]) if s.size else 0.0, 1.0)
    k = int(np.sum(s <= tol_rel * escala)) + (A.shape[1] - s.size)
    if k == 0:
        return np.zeros((A.shape[1], 0), dtype=vh.dtype)
    return vh[-k:].conj().T


def cluster_subspace(M: np.ndarray, centro: complex, raio: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Subespaço invariante dos autovalores de M a menos de `raio` de `centro`.

    Retorna (Z1, T11): base ortonormal Z1 (colunas) e a restrição
    T11 = Z1ᴴ M Z1, pela forma de Schur reordenada. Para M e centro
    reais usa a forma real, e Z1 sai real.
    """
    c = complex(centro)
    real = c.imag == 0.0 and np.isrealobj(M)
    for r in (raio, 10.0 * raio):
        try:
            if real:
                T, Z, k = linalg.schur(M, output="real", sort=lambda x, y: abs(complex(x, y) - c.real) < r)
            else:
                T, Z, k = linalg.schur(np.asarray(M, dtype=complex), output="complex", sort=lambda z: abs(z - c) < r)
            return Z[:, :k], T[:k, :k]
        except linalg.LinAlgError:
            # reordenação instável na borda do disco: tenta um raio maior
            continue
    raise UnresolvedClassError(f"[ERRO] Schur reordenada falhou perto de {c} (raio {raio})")


def eig_dense(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Autovalores e autovetores à direita (matriz densa não simétrica)."""
    return linalg.eig(M)


def eigvals_symmetric(A: np.ndarray) -> np.ndarray:
    """Autovalores (ordenados) de uma matriz real simétrica."""
    return linalg.eigvalsh(A)


def count_nonpositive_symmetric(A: np.ndarray) -> int:
    """Número de autovalores <= 0 de uma matriz simétrica (resolvedor com subconjunto)."""
    if A.shape[0] == 0:
        return 0
    w = linalg.eigvalsh(A, subset_by_value=[-np.inf, 0.0])
    return int(w.size)


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)
