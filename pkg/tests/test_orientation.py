"""The sign sigma in psi(E^l_n J^k) = F^l_n u^{sigma k} is forced: the other sign breaks psi."""

import pytest

from lamplighter import odometer
from lamplighter.periodic import prufer_E, psi, shift_J
from lamplighter.scalar import root_of_unity

BASIS_PAIRS = [(shift_J(1), prufer_E(n, l)) for n in (1, 2, 3) for l in range(1, 1 << n, 2)]


def psi_multiplicative_on_basis_pairs():
    return all(psi(A * B) == psi(A) * psi(B) and psi(B * A) == psi(B) * psi(A) for A, B in BASIS_PAIRS)


def test_commutation_of_generators():
    J = shift_J()
    for n in (1, 2, 3):
        for l in range(1 << n):
            E = prufer_E(n, l)
            assert J * E == (E * J).scale(root_of_unity(n, odometer.ORIENTATION * l))


def test_chosen_orientation_passes():
    assert odometer.ORIENTATION in (1, -1)
    assert psi_multiplicative_on_basis_pairs()


def test_other_orientation_fails(monkeypatch):
    monkeypatch.setattr(odometer, "ORIENTATION", -odometer.ORIENTATION)
    assert not psi_multiplicative_on_basis_pairs()


@pytest.mark.parametrize("sigma", [1, -1])
def test_exactly_one_sign_works(monkeypatch, sigma):
    monkeypatch.setattr(odometer, "ORIENTATION", sigma)
    assert psi_multiplicative_on_basis_pairs() == (sigma == 1)
