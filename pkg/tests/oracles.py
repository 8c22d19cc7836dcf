"""Independent reference computations used by the tests.

Nothing here imports the amplitude code under test: spinors come from a
numerical eigen-decomposition of sigma . p, and every amplitude is obtained
by solving the continuity equations as a plain linear system.
"""

import cmath
import math

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def eig_spinor(k1, p2, p3, energy, c=1.0):
    """Unit solution of (sigma . p) u = (energy / c) u, first component real positive."""
    H = k1 * SX + p2 * SY + p3 * SZ
    vals, vecs = np.linalg.eigh(H)
    target = energy / c
    idx = int(np.argmin(np.abs(vals - target)))
    assert abs(vals[idx] - target) < 1e-9 * max(1.0, abs(target)), (vals, target)
    u = vecs[:, idx]
    u = u / np.linalg.norm(u)
    return u * (abs(u[0]) / u[0])


def momenta(E, V0, p2, p3, c=1.0):
    p1 = math.sqrt(E**2 - (p2 * c) ** 2 - (p3 * c) ** 2) / c
    arg = (E - V0) ** 2 - (p2 * c) ** 2 - (p3 * c) ** 2
    q1 = math.sqrt(arg) / c
    return p1, q1


def _solve_interface(inc, refl, trans, phase_inc=1.0, phase_refl=1.0, phase_trans=1.0):
    """inc*phase_inc + r refl*phase_refl = t trans*phase_trans."""
    M = np.column_stack([refl * phase_refl, -trans * phase_trans])
    r, t = np.linalg.solve(M, -inc * phase_inc)
    return complex(r), complex(t)


def step1(E, V0, p2, p3, c=1.0):
    p1, q1 = momenta(E, V0, p2, p3, c)
    return _solve_interface(eig_spinor(p1, p2, p3, E, c), eig_spinor(-p1, p2, p3, E, c),
                            eig_spinor(q1, p2, p3, E - V0, c))


def step2(E, V0, p2, p3, L, c=1.0, hbar=1.0):
    p1, q1 = momenta(E, V0, p2, p3, c)
    return _solve_interface(eig_spinor(q1, p2, p3, E - V0, c), eig_spinor(-q1, p2, p3, E - V0, c),
                            eig_spinor(p1, p2, p3, E, c),
                            cmath.exp(1j * q1 * L / hbar), cmath.exp(-1j * q1 * L / hbar),
                            cmath.exp(1j * p1 * L / hbar))


def step3(E, V0, p2, p3, c=1.0):
    p1, q1 = momenta(E, V0, p2, p3, c)
    return _solve_interface(eig_spinor(-q1, p2, p3, E - V0, c), eig_spinor(q1, p2, p3, E - V0, c),
                            eig_spinor(-p1, p2, p3, E, c))


def barrier(E, V0, p2, p3, L, c=1.0, hbar=1.0):
    """(t, r) from the four continuity conditions built with eigen-spinors."""
    p1, q1 = momenta(E, V0, p2, p3, c)
    up, um = eig_spinor(p1, p2, p3, E, c), eig_spinor(-p1, p2, p3, E, c)
    uq, uqm = eig_spinor(q1, p2, p3, E - V0, c), eig_spinor(-q1, p2, p3, E - V0, c)
    e = lambda k: cmath.exp(1j * k * L / hbar)
    M = np.zeros((4, 4), dtype=complex)
    M[:2, 0], M[:2, 1], M[:2, 2] = um, -uq, -uqm
    M[2:, 1], M[2:, 2], M[2:, 3] = uq * e(q1), uqm * e(-q1), -up * e(p1)
    rhs = np.concatenate([-up, np.zeros(2)])
    r, A, B, t = np.linalg.solve(M, rhs)
    return complex(t), complex(r)


def incoherent_sum(E, V0, p2, p3, L=1.0, c=1.0, n_max=100_000, tol=1e-16):
    """Partial sums of |t0 tL|^2 |loop|^{2s} and |r0|^2 + |t0 rL t~0|^2 |loop|^{2s} until the terms vanish."""
    r0, t0 = step1(E, V0, p2, p3, c)
    rL, tL = step2(E, V0, p2, p3, L, c)
    rt0, tt0 = step3(E, V0, p2, p3, c)
    loop2 = abs(rL * rt0) ** 2
    T, R = 0.0, abs(r0) ** 2
    a, b = abs(t0 * tL) ** 2, abs(t0 * rL * tt0) ** 2
    term = 1.0
    for _ in range(n_max):
        T += a * term
        R += b * term
        term *= loop2
        if term < tol:
            break
    return T, R


def resonance_energy(n, V0, L, p2=0.0, p3=0.0, c=1.0, hbar=1.0):
    """E with q1 L / hbar = n pi, solved analytically."""
    return V0 + math.hypot(n * math.pi * hbar * c / L, math.hypot(p2, p3) * c)
