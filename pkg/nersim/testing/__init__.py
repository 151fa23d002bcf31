"""Operating points shared by the test suite and the example configs."""

from .operating_points import (
    UNIT_CONSTANTS,
    OperatingPoint,
    example_configs,
    sb_e_amp,
    sb_nucleus,
    sb_operating_point,
    toy_nucleus,
    toy_operating_point,
    toy_two_qubit_pair,
)

__all__ = [
    "UNIT_CONSTANTS",
    "OperatingPoint",
    "sb_nucleus",
    "sb_e_amp",
    "sb_operating_point",
    "toy_nucleus",
    "toy_operating_point",
    "toy_two_qubit_pair",
    "example_configs",
]
