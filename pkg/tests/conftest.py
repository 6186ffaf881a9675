import numpy as np
import pytest

from spinhall import (BeamParams, ControlFieldSet, LayerStack, MediumParams,
                      effective_couplings)

LAM = 780e-9


def medium_from(amplitudes, phase1=0.0, eta=0.1):
    fs = ControlFieldSet.from_amplitudes(*amplitudes, p1=phase1)
    return MediumParams(gamma_b=1.0, gamma_e=1.0, eta=eta,
                        couplings=effective_couplings(fs))


@pytest.fixture
def ctl_medium():
    return medium_from((1.5, 3.0, 2.5, 0.9))


@pytest.fixture
def lambda_medium():
    return medium_from((0.5, 0.5, 0.7, 0.7), phase1=np.pi)


@pytest.fixture
def ntype_medium():
    return medium_from((0.5, 0.5, 0.7, 0.7))


@pytest.fixture
def vacuum_stack():
    return LayerStack(eps2=1.0 + 0j)


@pytest.fixture
def beam():
    return BeamParams(w0=50 * LAM, lam=LAM)
