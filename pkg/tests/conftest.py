#!/usr/bin/env python3
"""
Pytest configuration and shared fixtures for nersim testing
"""

import math
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict

import pytest
import yaml

sys.path.insert(0, str(Path(__file__).parent.parent))

from nersim.core.atomic import AtomModel, Orbital
from nersim.core.physics import IntegratorConfig
from nersim.testing import (
    example_configs,
    sb_operating_point,
    toy_operating_point,
    toy_two_qubit_pair,
)


# =================== PHYSICS FIXTURES ===================

@pytest.fixture(scope="session")
def sb_point():
    """Sb-like S = 7/2 nucleus driven at the measured 684.2 Hz Rabi rate"""
    return sb_operating_point()


@pytest.fixture
def toy_point_factory():
    """Natural-unit operating points for any spin"""
    return toy_operating_point


@pytest.fixture(scope="session")
def toy_pair():
    """Two S = 3/2 nuclei in natural units, no J coupling switched on"""
    return toy_two_qubit_pair()


@pytest.fixture
def mixed_n2_atom():
    """Hydrogen with one Stark-mixed (|200> + |210>)/sqrt(2) electron"""
    orbital = Orbital(n=2, m=0, coeffs={0: 1.0 / math.sqrt(2.0), 1: 1.0 / math.sqrt(2.0)})
    return AtomModel(z_atomic=1, electrons=(orbital,))


@pytest.fixture
def tight_integrator():
    return IntegratorConfig(dt_max=1e-2, tol=1e-12)


# =================== CLI TESTING FIXTURES ===================

@pytest.fixture
def temp_workspace():
    """Temporary workspace for CLI testing"""
    with tempfile.TemporaryDirectory() as tmpdir:
        workspace = Path(tmpdir)

        (workspace / "configs" / "experiments").mkdir(parents=True)
        (workspace / "results").mkdir()

        yield workspace


@pytest.fixture
def mock_cli_runner():
    """Click CLI runner for testing commands"""
    from click.testing import CliRunner
    return CliRunner()


@pytest.fixture
def example_config_data() -> Dict[str, Dict[str, Any]]:
    return example_configs()


@pytest.fixture
def write_config(tmp_path):
    """Write a config mapping to YAML and return its path"""

    def _write(data: Dict[str, Any], name: str = "experiment.yaml") -> Path:
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, sort_keys=False)
        return path

    return _write


def pytest_collection_modifyitems(config, items):
    """Tag everything under tests/integration with the integration marker"""
    for item in items:
        if "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)
