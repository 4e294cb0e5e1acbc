"""Fisher information and Cramer-Rao lower bounds for the velocity pair.

The unknown vector is (radial velocity, transverse velocity) with everything
else known.  Two routes compute the 2x2 information matrix:

* :func:`fisher_info_numeric` sums derivative products over every sample of a
  synthesized observation cube;
* :func:`fisher_info_closed_form` collapses the slow-time sum analytically
  into a per-subcarrier weight times projection-coefficient sums.

The routes intentionally share no arithmetic beyond the geometry primitives
they both consume, so their agreement is a meaningful cross-check.  The rest
of the module holds the boresight / far-field special forms and the distance
at which the two bounds trade places.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT
from .geometry import (
    ArrayGeometry,
    TargetState,
    radial_projection_coeffs,
    symmetric_index_grid,
    transverse_projection_coeffs,
)
from .waveform import (
    ChannelNoise,
    WaveformConfig,
    subcarrier_frequencies,
    synthesize_noise_free,
)

__all__ = [
    "CrlbResult",
    "FisherInfo",
    "crlb_from_fisher",
    "crossover_distance",
    "fisher_info_closed_form",
    "fisher_info_numeric",
    "radial_crlb_far_field",
    "radial_info_boresight",
    "transverse_info_boresight",
    "transverse_info_boresight_approx",
    "transverse_info_half_wavelength",
]

# Relative determinant floor below which the matrix is declared singular, and
# an absolute floor guarding the all-zero matrix.
_SINGULAR_RTOL = 1e-12
_SINGULAR_ABS_FLOOR = 1e-300
# A mildly negative determinant is rounding residue; anything worse is an
# upstream bug.
_NEGATIVE_DET_RTOL = 1e-9


@dataclass(frozen=True)
class FisherInfo:
    """Symmetric 2x2 Fisher information over (radial, transverse) velocity."""

    j_rr: float
    j_tt: float
    j_rt: float

    @property
    def determinant(self) -> float:
        return self.j_rr * self.j_tt - self.j_rt**2

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.j_rr, self.j_rt], [self.j_rt, self.j_tt]])


@dataclass(frozen=True)
class CrlbResult:
    """Variance lower bounds in (m/s)^2; infinite entries mark unidentifiable axes."""

    radial: float
    transverse: float
    singular: bool


def _validate_positive_snr(snr: float) -> None:
    if not snr > 0.0:
        raise ValueError(f"snr must be positive, got {snr!r}")


def fisher_info_numeric(
    target: TargetState,
    geometry: ArrayGeometry,
    config: WaveformConfig,
    snr: float,
) -> FisherInfo:
    """Information matrix by brute-force summation over the sample cube.

    Synthesizes the noise-free observation at unit channel gain and
    accumulates ``(2/sigma^2) * Re{conj(dy_i) * dy_j}`` over all
    ``(m, n, k)``, where the derivative of sample ``y`` with respect to the
    radial velocity is ``y * j*2*pi*(f_n/c)*(1 + q_k)*m*T_sym`` and with
    respect to the transverse velocity is
    ``y * j*2*pi*(f_n/c)*p_k*m*T_sym``.  Exact per-subcarrier frequencies
    are used throughout.  The result does not depend on the target's
    velocity, only on its position.
    """
    _validate_positive_snr(snr)
    noise = ChannelNoise.from_snr(config, snr)
    cube = synthesize_noise_free(target, geometry, config, noise)

    m_grid = symmetric_index_grid(config.num_symbols)
    freqs = subcarrier_frequencies(config)
    q = radial_projection_coeffs(target, geometry)
    p = transverse_projection_coeffs(target, geometry)

    # Phase sensitivities, shaped (M, N, K).
    scale = 2.0 * math.pi * config.symbol_time / SPEED_OF_LIGHT
    radial_sens = scale * m_grid[:, None, None] * freqs[None, :, None] * (1.0 + q)[None, None, :]
    transverse_sens = scale * m_grid[:, None, None] * freqs[None, :, None] * p[None, None, :]

    dy_radial = cube.samples * (1j * radial_sens)
    dy_transverse = cube.samples * (1j * transverse_sens)

    weight = 2.0 / noise.noise_variance
    j_rr = weight * float(np.sum((dy_radial.conj() * dy_radial).real))
    j_tt = weight * float(np.sum((dy_transverse.conj() * dy_transverse).real))
    j_rt = weight * float(np.sum((dy_radial.conj() * dy_transverse).real))
    return FisherInfo(j_rr=j_rr, j_tt=j_tt, j_rt=j_rt)


def fisher_info_closed_form(
    target: TargetState,
    geometry: ArrayGeometry,
    config: WaveformConfig,
    snr: float,
) -> FisherInfo:
    """Information matrix via the analytic slow-time reduction.

    For each subcarrier the slow-time sum collapses to the weight

        w_n = 2 * pi^2 * f_n^2 * M * snr * (M^2 - 1) * T_sym^2 / (3 * c^2)

    and the matrix entries are that weight times the element sums of
    ``(1 + q_k)^2``, ``p_k^2`` and ``p_k * (1 + q_k)``.
    """
    _validate_positive_snr(snr)
    m_count = config.num_symbols
    freqs = subcarrier_frequencies(config)
    weights = (
        2.0
        * math.pi**2
        * freqs**2
        * m_count
        * snr
        * (m_count**2 - 1)
        * config.symbol_time**2
        / (3.0 * SPEED_OF_LIGHT**2)
    )
    weight_total = float(np.sum(weights))

    q = radial_projection_coeffs(target, geometry)
    p = transverse_projection_coeffs(target, geometry)
    one_plus_q = 1.0 + q
    return FisherInfo(
        j_rr=weight_total * float(np.sum(one_plus_q**2)),
        j_tt=weight_total * float(np.sum(p**2)),
        j_rt=weight_total * float(np.sum(p * one_plus_q)),
    )


def crlb_from_fisher(info: FisherInfo) -> CrlbResult:
    """Invert a 2x2 information matrix into per-component variance bounds.

    A determinant below ``1e-12`` of the diagonal product marks the matrix
    singular: the transverse axis is reported infinite and the radial bound
    falls back to the single-parameter value ``1/j_rr``.  A meaningfully
    negative determinant or diagonal signals an upstream bug and raises.
    """
    j_rr, j_tt, j_rt = info.j_rr, info.j_tt, info.j_rt
    if j_rr < 0.0 or j_tt < 0.0:
        raise ValueError(f"information diagonal must be nonnegative, got {info!r}")
    det = info.determinant
    diag_product = j_rr * j_tt
    if det < -_NEGATIVE_DET_RTOL * max(diag_product, 1.0):
        raise ValueError(f"information matrix is negative definite: {info!r}")

    if det < _SINGULAR_RTOL * max(diag_product, _SINGULAR_ABS_FLOOR):
        radial = 1.0 / j_rr if j_rr > 0.0 else math.inf
        transverse = 1.0 / j_tt if (j_tt > 0.0 and j_rr == 0.0) else math.inf
        return CrlbResult(radial=radial, transverse=transverse, singular=True)
    return CrlbResult(radial=j_tt / det, transverse=j_rr / det, singular=False)


def radial_crlb_far_field(config: WaveformConfig, num_elements: int, snr: float) -> float:
    """Radial velocity bound when every element sees the same line of sight.

    ``3*c^2 / (8*pi^2*f_c^2*M*N*K*snr*(M^2-1)*T_sym^2)``; infinite for a
    single symbol, since one pulse carries no Doppler information.
    """
    _validate_positive_snr(snr)
    if num_elements < 1:
        raise ValueError(f"num_elements must be >= 1, got {num_elements!r}")
    m_count = config.num_symbols
    if m_count == 1:
        return math.inf
    denom = (
        8.0
        * math.pi**2
        * config.carrier**2
        * m_count
        * config.num_subcarriers
        * num_elements
        * snr
        * (m_count**2 - 1)
        * config.symbol_time**2
    )
    return 3.0 * SPEED_OF_LIGHT**2 / denom


def _boresight_weight(config: WaveformConfig, snr: float) -> float:
    # Per-element information weight at the carrier frequency, all N
    # subcarriers folded in under the narrowband approximation f_n ~ f_c.
    m_count = config.num_symbols
    return (
        2.0
        * math.pi**2
        * config.carrier**2
        * m_count
        * config.num_subcarriers
        * snr
        * (m_count**2 - 1)
        * config.symbol_time**2
        / (3.0 * SPEED_OF_LIGHT**2)
    )


def radial_info_boresight(
    distance: float, geometry: ArrayGeometry, config: WaveformConfig, snr: float
) -> float:
    """Closed-form ``j_rr`` for a target on the array normal.

    Equals the boresight weight times ``sum_k (1 + 1/sqrt(1 + k^2*delta^2/d^2))^2``;
    bounded by ``4*K`` times the weight, with equality in the far field.
    """
    if not distance > 0.0:
        raise ValueError(f"distance must be positive, got {distance!r}")
    _validate_positive_snr(snr)
    k_grid = symmetric_index_grid(geometry.num_elements)
    ratio_sq = (k_grid * geometry.spacing / distance) ** 2
    terms = (1.0 + 1.0 / np.sqrt(1.0 + ratio_sq)) ** 2
    return _boresight_weight(config, snr) * float(np.sum(terms))


def transverse_info_boresight(
    distance: float, geometry: ArrayGeometry, config: WaveformConfig, snr: float
) -> float:
    """Closed-form ``j_tt`` for a target on the array normal (no aperture approximation).

    Boresight weight times ``(delta^2/d^2) * sum_k k^2/(1 + k^2*delta^2/d^2)``.
    Zero for a single element: one element carries no transverse information.
    """
    if not distance > 0.0:
        raise ValueError(f"distance must be positive, got {distance!r}")
    _validate_positive_snr(snr)
    k_grid = symmetric_index_grid(geometry.num_elements)
    ratio_sq = (k_grid * geometry.spacing / distance) ** 2
    series = float(np.sum(k_grid**2 / (1.0 + ratio_sq)))
    prefactor = _boresight_weight(config, snr) * geometry.spacing**2 / distance**2
    return prefactor * series


def transverse_info_boresight_approx(
    distance: float,
    geometry: ArrayGeometry,
    config: WaveformConfig,
    snr: float,
    *,
    aperture_form: bool = False,
) -> float:
    """Small-aperture approximation of :func:`transverse_info_boresight`.

    With ``aperture_form=False`` the element sum is replaced by its leading
    term ``K*(K^2-1)/12``:

        pi^2 * f_c^2 * M * N * K * snr * (M^2-1) * T_sym^2 * (K^2-1) * delta^2
            / (18 * c^2 * d^2)

    With ``aperture_form=True`` the same quantity is expressed through the
    physical aperture ``D = (K-1)*delta`` and observation time
    ``T_obs^2 ~ (M^2-1)*T_sym^2``, replacing ``(K^2-1)*delta^2`` by ``D^2``.
    The two differ by the factor ``(K+1)/(K-1)``, i.e. about ``2/K``.
    """
    if not distance > 0.0:
        raise ValueError(f"distance must be positive, got {distance!r}")
    _validate_positive_snr(snr)
    k_count = geometry.num_elements
    m_count = config.num_symbols
    if aperture_form:
        length_sq = geometry.aperture**2
    else:
        length_sq = (k_count**2 - 1) * geometry.spacing**2
    return (
        math.pi**2
        * config.carrier**2
        * m_count
        * config.num_subcarriers
        * k_count
        * snr
        * (m_count**2 - 1)
        * config.symbol_time**2
        * length_sq
        / (18.0 * SPEED_OF_LIGHT**2 * distance**2)
    )


def transverse_info_half_wavelength(
    distance: float, num_elements: int, config: WaveformConfig, snr: float
) -> float:
    """Boresight transverse information for half-wavelength element spacing.

    Substituting ``delta = c/(2*f_c)`` cancels the carrier entirely:

        pi^2 * M * N * K * snr * (M^2-1) * T_sym^2 * (K^2-1) / (72 * d^2)

    The function reads only the grid sizes and symbol time from ``config``;
    by construction the result is carrier-independent.
    """
    if not distance > 0.0:
        raise ValueError(f"distance must be positive, got {distance!r}")
    if num_elements < 1:
        raise ValueError(f"num_elements must be >= 1, got {num_elements!r}")
    _validate_positive_snr(snr)
    m_count = config.num_symbols
    return (
        math.pi**2
        * m_count
        * config.num_subcarriers
        * num_elements
        * snr
        * (m_count**2 - 1)
        * config.symbol_time**2
        * (num_elements**2 - 1)
        / (72.0 * distance**2)
    )


def crossover_distance(geometry: ArrayGeometry) -> float:
    """Distance below which the transverse bound beats the far-field radial bound.

    ``D / (4*sqrt(3))`` for aperture ``D``; at exactly this distance the
    far-field radial bound and the reciprocal of the aperture-form
    transverse approximation coincide.
    """
    return geometry.aperture / (4.0 * math.sqrt(3.0))
