"""Shared fixtures: the default lattice, the reference packet, and one
large diffusion ensemble reused by every Monte-Carlo test."""

import numpy as np
import pytest

from madelung_lab import (GaussianPacketSpec, GridSpec, decompose, drift,
                          gaussian_packet, simulate_ensemble)

ENSEMBLE_N = 100_000
ENSEMBLE_PARTITION = 256
ENSEMBLE_SUBSTEPS = 4
ENSEMBLE_SEED = 2025


@pytest.fixture(scope="session")
def grid():
    return GridSpec(-12.0, 12.0, 512, 256)


@pytest.fixture(scope="session")
def packet_spec():
    return GaussianPacketSpec()


@pytest.fixture(scope="session")
def psi(packet_spec, grid):
    return gaussian_packet(packet_spec, grid)


@pytest.fixture(scope="session")
def packet_parts(psi):
    rho, phase, couple = decompose(psi)
    return rho, phase, couple


@pytest.fixture(scope="session")
def packet_couple(packet_parts):
    return packet_parts[2]


@pytest.fixture(scope="session")
def packet_drift(packet_couple):
    return drift(packet_couple)


@pytest.fixture(scope="session")
def big_ensemble(packet_drift, packet_couple, grid):
    return simulate_ensemble(packet_drift, packet_couple.rho.values[0], grid,
                             ENSEMBLE_N, ENSEMBLE_PARTITION,
                             ENSEMBLE_SUBSTEPS, ENSEMBLE_SEED)
