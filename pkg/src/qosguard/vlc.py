"""Line-of-sight optical channel gain and the 7-band visible-light channel plan.

Channels in the admission model are fungible integers; this module supplies
the physical-layer decoration: the Lambertian LOS link budget and the 7-bit
color-band masks that name concrete channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# (band index, low nm, high nm); bands tile 380..780 with shared boundaries,
# a boundary wavelength resolves to the lower-indexed band
BAND_PLAN = (
    (1, 380, 450),
    (2, 450, 510),
    (3, 510, 560),
    (4, 560, 600),
    (5, 600, 650),
    (6, 650, 710),
    (7, 710, 780),
)

NUM_BANDS = 7


@dataclass(frozen=True)
class OpticalLinkParams:
    half_power_angle: float   # transmitter half-power angle, degrees
    detector_area: float      # photo-detector area, m^2
    distance: float           # transmitter-receiver distance, m
    irradiance_angle: float   # degrees
    incidence_angle: float    # degrees
    fov: float                # receiver field of view, degrees
    filter_coeff: float = 1.0
    refractive_index: float = 1.5

    def __post_init__(self):
        if not 0 < self.half_power_angle < 90:
            raise ValueError(f"half-power angle must be in (0, 90), got {self.half_power_angle}")
        if self.distance <= 0:
            raise ValueError(f"distance must be > 0, got {self.distance}")
        if self.detector_area <= 0:
            raise ValueError(f"detector area must be > 0, got {self.detector_area}")
        if not 0 <= self.fov <= 90:
            raise ValueError(f"FOV must be in [0, 90], got {self.fov}")
        if not 0 <= self.filter_coeff <= 1:
            raise ValueError(f"filter coefficient must be in [0, 1], got {self.filter_coeff}")
        if self.refractive_index < 1:
            raise ValueError(f"refractive index must be >= 1, got {self.refractive_index}")


def lambertian_order(half_power_angle: float) -> float:
    """Lambertian emission order from the half-power angle in degrees."""
    if not 0 < half_power_angle < 90:
        raise ValueError(f"half-power angle must be in (0, 90), got {half_power_angle}")
    return -math.log(2) / math.log(math.cos(math.radians(half_power_angle)))


def concentrator_gain(psi: float, fov: float, refractive_index: float) -> float:
    """Optical concentrator gain; zero outside the field of view. Angles in degrees."""
    if refractive_index < 1:
        raise ValueError(f"refractive index must be >= 1, got {refractive_index}")
    if psi < 0 or psi > fov:
        return 0.0
    return refractive_index**2 / math.sin(math.radians(fov)) ** 2


def los_channel_gain(params: OpticalLinkParams) -> float:
    """DC channel gain of the line-of-sight link; zero outside the FOV."""
    if params.incidence_angle < 0 or params.incidence_angle > params.fov:
        return 0.0
    tau = lambertian_order(params.half_power_angle)
    g = concentrator_gain(params.incidence_angle, params.fov, params.refractive_index)
    return (
        (tau + 1)
        * params.detector_area
        / (2 * math.pi * params.distance**2)
        * math.cos(math.radians(params.irradiance_angle)) ** tau
        * params.filter_coeff
        * g
        * math.cos(math.radians(params.incidence_angle))
    )


def received_power(transmit_power: float, gain: float) -> float:
    """Received optical power = gain * transmitted power."""
    if transmit_power < 0:
        raise ValueError(f"transmit power must be >= 0, got {transmit_power}")
    if gain < 0:
        raise ValueError(f"gain must be >= 0, got {gain}")
    return gain * transmit_power


def _validate_mask(mask: str) -> str:
    if len(mask) != NUM_BANDS or any(c not in "01" for c in mask):
        raise ValueError(f"band mask must be 7 bits of 0/1, got {mask!r}")
    if mask == "0000000":
        raise ValueError("band mask 0000000 is not a valid channel")
    return mask


def decode_band_mask(mask: str) -> set[int]:
    """Band indices selected by a 7-bit mask; band 1 is the leftmost bit."""
    _validate_mask(mask)
    return {i + 1 for i, c in enumerate(mask) if c == "1"}


def encode_band_mask(bands) -> str:
    """7-bit mask selecting the given band indices."""
    bands = set(bands)
    if not bands:
        raise ValueError("at least one band must be selected")
    if not bands <= set(range(1, NUM_BANDS + 1)):
        raise ValueError(f"band indices must be within 1..{NUM_BANDS}, got {sorted(bands)}")
    return "".join("1" if i in bands else "0" for i in range(1, NUM_BANDS + 1))


def enumerate_masks() -> list[str]:
    """All 127 valid band masks, ascending as binary numbers."""
    return [format(v, "07b") for v in range(1, 2**NUM_BANDS)]


def band_for_wavelength(nm: float) -> int:
    """Index of the color band containing a wavelength in nm."""
    if not BAND_PLAN[0][1] <= nm <= BAND_PLAN[-1][2]:
        raise ValueError(f"wavelength {nm} nm outside the visible plan 380..780")
    for index, low, high in BAND_PLAN:
        if nm <= high:
            return index
    raise AssertionError("unreachable: plan tiles the spectrum")


def band_widths() -> tuple[int, ...]:
    return tuple(high - low for _, low, high in BAND_PLAN)
