"""Shared builders for the test suite."""

import pytest

from nfvel import ArrayGeometry, TargetState, WaveformConfig


@pytest.fixture
def default_waveform():
    """Reference burst: 28 GHz, single subcarrier, 14 symbols of 16.6 ms."""
    return WaveformConfig(
        carrier=28e9,
        num_subcarriers=1,
        subcarrier_spacing=120e3,
        num_symbols=14,
        symbol_time=16.6e-3,
    )


@pytest.fixture
def default_geometry():
    """101 elements at half-wavelength spacing for the 28 GHz carrier."""
    return ArrayGeometry.half_wavelength(101, 28e9)


@pytest.fixture
def boresight_target():
    return TargetState(distance=10.0, angle=0.0, radial_velocity=3.0, transverse_velocity=1.0)


def make_waveform(**overrides) -> WaveformConfig:
    params = dict(
        carrier=28e9,
        num_subcarriers=1,
        subcarrier_spacing=120e3,
        num_symbols=14,
        symbol_time=16.6e-3,
    )
    params.update(overrides)
    return WaveformConfig(**params)
