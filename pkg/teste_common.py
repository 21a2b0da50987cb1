import math

import numpy as np
import pytest

from common import (
    Bracket,
    DegenerateBracket,
    DomainError,
    Tolerancias,
    bisect,
    bisect_predicate,
    bisect_root,
    central_difference,
    cluster_subspace,
    count_nonpositive_symmetric,
    make_bracket,
    max_iteracoes,
    null_basis,
    null_dimension,
    scan_sign_changes,
)


def test_bisect_raiz_de_dois():
    f = lambda x: x * x - 2.0
    raiz = bisect_root(f, make_bracket(f, 1.0, 2.0), 1e-12)
    assert raiz == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_bisect_nunca_sai_do_intervalo_e_respeita_iteracoes():
    avaliados = []

    def f(x):
        avaliados.append(x)
        return x - 0.3

    br = make_bracket(f, 0.0, 1.0)
    avaliados.clear()
    final = bisect(f, br, 1e-9)
    assert final.largura <= 1e-9
    assert all(0.0 <= x <= 1.0 for x in avaliados)
    assert len(avaliados) <= max_iteracoes(br, 1e-9)
    assert final.f_lo < 0 < final.f_hi


def test_bisect_sem_troca_de_sinal():
    f = lambda x: x * x + 1.0
    with pytest.raises(DegenerateBracket):
        bisect(f, make_bracket(f, -1.0, 1.0), 1e-6)


def test_bisect_xtol_invalido():
    f = lambda x: x
    with pytest.raises(DomainError):
        bisect(f, make_bracket(f, -1.0, 1.0), 0.0)


def test_bracket_degenerado():
    assert Bracket(0.0, 1.0, 1.0, 2.0).degenerado
    assert not Bracket(0.0, 1.0, -1.0, 2.0).degenerado


def test_bisect_predicate_localiza_degrau():
    salto = 0.637
    br = bisect_predicate(lambda x: math.floor(3 * x) >= 1 and x >= salto, 0.0, 1.0, 1e-10)
    assert br.lo <= salto <= br.hi
    assert br.largura <= 1e-10


def test_scan_sign_changes_encontra_todas():
    brackets = scan_sign_changes(math.sin, 0.5, 10.0, 0.1)
    raizes = [bisect_root(math.sin, b, 1e-10) for b in brackets]
    assert raizes == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi], abs=1e-9)


def test_nulidade_por_svd():
    A = np.diag([3.0, 1.0, 1e-14, 0.0])
    assert null_dimension(A, 1e-10) == 2
    base = null_basis(A, 1e-10)
    assert base.shape == (4, 2)
    assert np.linalg.norm(A @ base) < 1e-12


def test_subespaco_do_aglomerado():
    M = np.diag([5e8, 1.0 + 1e-6, 1.0 - 1e-6, 2e-9])
    Z1, T11 = cluster_subspace(M, 1.0, 1e-4)
    assert Z1.shape == (4, 2) and np.isrealobj(Z1)
    assert np.allclose(Z1.T @ Z1, np.eye(2))
    assert sorted(np.diag(T11)) == pytest.approx([1.0 - 1e-6, 1.0 + 1e-6], abs=1e-12)
    assert np.allclose(M @ Z1, Z1 @ T11)

    Z1, T11 = cluster_subspace(M, 1j, 1e-4)
    assert Z1.shape == (4, 0)


def test_conta_autovalores_nao_positivos():
    A = np.diag([-2.0, 0.0, 1.0, 5.0])
    assert count_nonpositive_symmetric(A) == 2


def test_diferenca_central():
    assert central_difference(math.exp, 0.0, 1e-4) == pytest.approx(1.0, abs=1e-8)


def test_tolerancias_de_dicionario():
    tol = Tolerancias.de_dicionario({"N": "72", "galerkin": 1e-9})
    assert tol.N == 72 and isinstance(tol.N, int)
    assert tol.galerkin == 1e-9
    assert tol.como_dicionario()["passo_e"] == 0.01
    with pytest.raises(DomainError):
        Tolerancias.de_dicionario({"inexistente": 1})
