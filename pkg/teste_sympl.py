import cmath
import math

import numpy as np
import pytest

from common import DomainError
from curves import closed_form_beta
from essential import J4, monodromy, monodromy_e0_exact, monodromy_iterate
from galerkin import galerkin_indices
from model import make_params
from sympl import (
    bott_iterate_index,
    classify,
    index_from_splitting,
    krein_sign,
    nullity,
    splitting_numbers,
    unit_eigenvalues,
)


def rot(theta):
    return np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])


def soma_direta(A, B):
    """A no plano (q1, p1), B no plano (q2, p2)."""
    M = np.zeros((4, 4))
    M[np.ix_([0, 2], [0, 2])] = A
    M[np.ix_([1, 3], [1, 3])] = B
    return M


def simpletica(M):
    return np.allclose(M.T @ J4 @ M, J4)


def test_duas_rotacoes_fortemente_estaveis():
    M = soma_direta(rot(1.0), rot(2.0))
    assert simpletica(M)
    cls = classify(M)
    assert cls.angulos == pytest.approx([1.0, 2.0])
    assert cls.semissimples and cls.krein_definido()
    assert cls.dimensao_no_circulo == 4
    assert not cls.tem_raiz_real_unitaria


def test_angulo_segue_sinal_de_krein():
    cls = classify(soma_direta(rot(-1.0), rot(2.0)))
    assert cls.angulos == pytest.approx([2.0, 2 * math.pi - 1.0])


def test_sinal_de_krein_de_rotacao():
    M = soma_direta(rot(1.0), rot(2.0))
    assert krein_sign(M, cmath.exp(1j)) == [1]
    assert krein_sign(soma_direta(rot(-1.0), rot(2.0)), cmath.exp(1j)) == [-1]


def test_krein_misto_nao_e_definido():
    cls = classify(soma_direta(rot(1.0), rot(-1.0)))
    assert cls.angulos == pytest.approx([1.0, 2 * math.pi - 1.0])
    assert not cls.krein_definido()


def test_krein_exige_autovalor_nao_real():
    M = soma_direta(rot(1.0), rot(2.0))
    with pytest.raises(DomainError):
        krein_sign(M, 1 + 0j)
    with pytest.raises(DomainError):
        krein_sign(M, cmath.exp(0.5j))


def test_hiperbolica_real():
    M = soma_direta(np.diag([3.0, 1 / 3]), np.diag([-2.0, -0.5]))
    assert simpletica(M)
    cls = classify(M)
    assert cls.dimensao_no_circulo == 0
    assert sorted(cls.multiplicadores) == pytest.approx([-2.0, 3.0])


def test_identidade():
    cls = classify(np.eye(4))
    assert cls.label == "I2⋄I2"
    assert cls.nulidades == {1: 4, -1: 0}


@pytest.mark.parametrize("b, rotulo", [(1.0, "N1(1,1)"), (-1.0, "N1(1,-1)")])
def test_bloco_de_jordan_em_um(b, rotulo):
    M = soma_direta(np.array([[1.0, b], [0.0, 1.0]]), rot(1.0))
    assert simpletica(M)
    cls = classify(M)
    assert rotulo in cls.label
    assert not cls.semissimples
    assert cls.nulidades[1] == 1


@pytest.mark.parametrize("sinal, tipo", [(1.0, "nontrivial"), (-1.0, "trivial")])
def test_colisao_de_krein_nao_semissimples(sinal, tipo):
    R = rot(math.pi / 2)
    M = np.block([[R, sinal * R], [np.zeros((2, 2)), R]])
    assert simpletica(M)
    cls = classify(M)
    assert cls.label == f"N2({math.pi / 2:.6f},{tipo})"
    assert not cls.semissimples


def test_nulidade():
    assert nullity(np.eye(4), 1 + 0j) == 4
    assert nullity(-np.eye(4), -1 + 0j) == 4
    with pytest.raises(DomainError):
        nullity(np.eye(4), 2 + 0j)


def test_numeros_de_desdobramento_de_rotacao():
    cls = classify(soma_direta(rot(1.0), rot(2.0)))
    sp = splitting_numbers(cls, cmath.exp(1j))
    assert (sp.s_plus, sp.s_minus) == (0, 1)
    sp = splitting_numbers(cls, cmath.exp(-1j))
    assert (sp.s_plus, sp.s_minus) == (1, 0)
    assert len(unit_eigenvalues(cls)) == 4


def test_indice_por_desdobramento():
    cls = classify(soma_direta(rot(1.0), rot(2.0)))
    assert index_from_splitting(3, cls, 1 + 0j) == 3
    # dois pontos com (S⁺, S⁻) = (0, 1) entre 1 e −1
    assert index_from_splitting(3, cls, -1 + 0j) == 1


def test_iteracao_de_bott():
    pares = {1: (1, 0), -1: (2, 1)}
    assert bott_iterate_index(pares, 1) == (1, 0)
    assert bott_iterate_index(pares, 2) == (3, 1)
    with pytest.raises(DomainError):
        bott_iterate_index(pares, 3)


def test_multiplicador_grande_nao_cria_nucleo_espurio():
    # ‖M‖₂ = 5e8: direções longe de ω ficam fora do subespaço do aglomerado
    M = soma_direta(np.diag([5e8, 2e-9]), rot(1.34))
    assert simpletica(M)
    assert nullity(M, 1 + 0j) == 0
    assert nullity(M, -1 + 0j) == 0
    assert nullity(M, cmath.exp(1.34j)) == 1
    assert len(krein_sign(M, cmath.exp(1.34j))) == 1
    cls = classify(M)
    assert [b.tipo for b in cls.blocos] == ["R", "D"]
    assert cls.nulidades == {1: 0, -1: 0}


def test_monodromia_em_4_2_e0_e_rotacao_mais_hiperbolica():
    M = monodromy(make_params(4.0, 2.0, 0.0)).M
    cls = classify(M)
    assert [b.tipo for b in cls.blocos] == ["R", "D"]

    # expoentes de λ⁴ − 6λ² − 11: ±√(3 + √20) e ±i√(√20 − 3)
    angulo_esperado = 2 * math.pi * (math.sqrt(math.sqrt(20.0) - 3.0) - 1.0)
    (angulo,) = cls.angulos
    assert min(angulo, 2 * math.pi - angulo) == pytest.approx(angulo_esperado, abs=1e-6)
    (multiplicador,) = cls.multiplicadores
    assert multiplicador == pytest.approx(math.exp(2 * math.pi * math.sqrt(3.0 + math.sqrt(20.0))), rel=1e-6)
    assert cls.nulidades == {1: 0, -1: 0}


@pytest.mark.parametrize(
    "alpha, beta, esperado",
    [
        (2.0, closed_form_beta(2.0, 1, 1), 2),    # Γ1: 1 semissimples duplo
        (2.0, closed_form_beta(2.0, -1, 0), 2),   # Σ0: −1 semissimples duplo
        (0.5, 0.5, 3),                            # I2⋄N1 em 1
    ],
)
def test_nucleo_do_iterado_soma_as_nulidades(alpha, beta, esperado):
    p = make_params(alpha, beta, 0.0)
    resultado = monodromy_e0_exact(p)
    M = resultado.M
    pares = {w: tuple(galerkin_indices(p, w).como_lista()) for w in (1, -1)}

    nu_quadrado = nullity(monodromy_iterate(resultado, 2), 1 + 0j)
    assert nu_quadrado == nullity(M, 1 + 0j) + nullity(M, -1 + 0j) == esperado
    assert bott_iterate_index(pares, 2)[1] == nu_quadrado
