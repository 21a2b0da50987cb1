import math

import pytest

from common import CollisionError, DomainError
from model import (
    Z_L,
    alpha_beta_from_geometry,
    from_tilde,
    lagrangian_beta,
    limit_geometry,
    make_masses,
    make_params,
    make_params_tilde,
    reduction_coefficients,
    to_tilde,
)


def test_transformacao_til_e_inversa():
    at, bt = to_tilde(2.0, 1.0)
    assert (at, bt) == pytest.approx((1.0, 0.0))
    assert from_tilde(at, bt) == pytest.approx((2.0, 1.0))
    # reta α = 3β − 1 vira β̃ = 0; reta α = 3β vira β̃ = −1
    assert to_tilde(3 * 0.7 - 1, 0.7)[1] == pytest.approx(0.0)
    assert to_tilde(3 * 0.7, 0.7)[1] == pytest.approx(-1.0)


def test_make_params_derivados():
    p = make_params(2.0, 0.5, 0.3)
    assert p.lambda3 == pytest.approx(4.5)
    assert p.lambda4 == pytest.approx(1.5)
    assert (p.alpha_tilde, p.beta_tilde) == pytest.approx((1.5, -1.5))
    assert not p.fronteira
    assert make_params(1.0, 0.0, 0.0).fronteira


@pytest.mark.parametrize("alpha, beta, e", [(0.5, 0.6, 0.0), (1.0, 0.5, 1.0), (1.0, 0.5, -0.1), (0.0, 0.0, 0.2), (1.0, -0.1, 0.0)])
def test_make_params_rejeita_fora_do_dominio(alpha, beta, e):
    with pytest.raises(DomainError):
        make_params(alpha, beta, e)


def test_make_params_relaxado():
    p = make_params(0.5, 0.9, -0.4, strict=False)
    assert p.e == -0.4
    with pytest.raises(DomainError):
        make_params(0.5, 0.9, 1.0, strict=False)


def test_make_params_tilde():
    p = make_params_tilde(0.1, -0.5, 0.2)
    assert (p.alpha_tilde, p.beta_tilde) == pytest.approx((0.1, -0.5))


def test_massas_iguais_e_beta_lagrangiano():
    massas = make_masses(1 / 3, 1 / 3)
    assert massas.m3 == pytest.approx(1 / 3)
    assert massas.alpha0 == pytest.approx(math.sqrt(3.0))
    assert lagrangian_beta(massas) == pytest.approx(9.0, abs=1e-12)


def test_massas_invalidas():
    with pytest.raises(DomainError):
        make_masses(0.6, 0.5)
    with pytest.raises(DomainError):
        make_masses(0.0, 0.5)
    assert make_masses(0.0, 0.5, permitir_limite=True).m1 == 0.0


def test_baricentro_com_massas_iguais():
    geom = limit_geometry((0.0 + 1.0 + Z_L) / 3.0)
    alpha, beta = alpha_beta_from_geometry(geom, make_masses(1 / 3, 1 / 3))
    assert alpha == pytest.approx(3.0 * math.sqrt(3.0) / 2.0, abs=1e-12)
    assert beta == pytest.approx(0.0, abs=1e-12)


def test_colisao_com_primario():
    with pytest.raises(CollisionError):
        limit_geometry(1.0 + 0j)


def test_coeficientes_de_reducao_reproduzem_lambdas():
    massas = make_masses(0.2, 0.3)
    geom = limit_geometry(complex(0.5, -0.8))
    alpha, beta = alpha_beta_from_geometry(geom, massas)
    coef = reduction_coefficients(massas, geom)
    p = make_params(alpha, beta, 0.0)
    assert coef.beta20 == pytest.approx(2.0 * alpha - 1.0, rel=1e-12)
    assert coef.lambda3 == pytest.approx(p.lambda3, rel=1e-12)
    assert coef.lambda4 == pytest.approx(p.lambda4, rel=1e-12)
    assert alpha >= beta
