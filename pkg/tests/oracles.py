"""Independent reference computations for the tests.

Everything here goes through scipy's spherical harmonics and plain
quadrature; nothing imports the closed-form coefficients under test.
"""

import numpy as np
from scipy.special import sph_harm_y


def sphere_grid(n_theta=48, n_phi=96):
    """Gauss-Legendre in cos(theta) x trapezoid in phi, with product weights."""
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = np.arange(n_phi) * 2 * np.pi / n_phi
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    return th, ph, w[:, None] * (2 * np.pi / n_phi)


INTEGRANDS = {
    "z": lambda th, ph: np.cos(th) ** 2,
    "x": lambda th, ph: np.cos(ph) ** 2 * np.sin(th) ** 2,
    "y": lambda th, ph: np.sin(ph) ** 2 * np.sin(th) ** 2,
}


def quadrature_matrix(states, axis, n_theta=48, n_phi=96):
    """<j',m'| f |j,m> for all pairs of ``states`` by 2-D quadrature."""
    th, ph, w = sphere_grid(n_theta, n_phi)
    ys = np.array([sph_harm_y(j, m, th, ph) for j, m in states])
    f = INTEGRANDS[axis](th, ph) * w
    out = np.einsum("aij,bij,ij->ab", ys.conj(), ys, f)
    assert np.max(np.abs(out.imag)) < 1e-12
    return out.real


def quadrature_element(jm_bra, jm_ket, axis):
    return quadrature_matrix([jm_bra, jm_ket], axis)[0, 1]


def polar_quadrature(j_bra, j_ket, m, power, n=60):
    """integral of Theta_j'^m cos^power(theta) Theta_j^m sin(theta) d(theta), times 2 pi."""
    x, w = np.polynomial.legendre.leggauss(n)
    theta = np.arccos(x)
    a = sph_harm_y(j_bra, m, theta, 0.0).real
    b = sph_harm_y(j_ket, m, theta, 0.0).real
    return 2 * np.pi * np.sum(w * a * b * x**power)


def kicked_on_grid(j0, m0, a2, xi, states, n_theta=64, n_phi=128):
    """Sudden kick as multiplication by exp(i xi O(theta, phi)), projected on ``states``."""
    th, ph, w = sphere_grid(n_theta, n_phi)
    b2 = 1 - a2
    potential = np.sin(th) ** 2 * ((a2 - b2) * np.cos(ph) ** 2 + b2)
    psi = sph_harm_y(j0, m0, th, ph) * np.exp(1j * xi * potential)
    return np.array([np.sum(sph_harm_y(j, m, th, ph).conj() * psi * w) for j, m in states])
