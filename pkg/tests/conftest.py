"""Shared fixtures; puts src/ on the import path the way the runner scripts see it."""

import sys
from pathlib import Path

import pytest

SRC_DIR = Path(__file__).resolve().parents[1] / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from iab_bvp_solver import DEFAULT_SETTINGS  # noqa: E402
from iab_geometry import MaterialParams, ReferenceShell  # noqa: E402


@pytest.fixture
def material():
    return MaterialParams(C1=1.1e4, C2=2.2e4, density=0.1, poisson=0.45)


@pytest.fixture
def expansion_shell():
    return ReferenceShell(R_i=0.027, R_o=0.03)


@pytest.fixture
def compression_shell():
    return ReferenceShell(R_i=0.03, R_o=0.033)


@pytest.fixture
def settings():
    return DEFAULT_SETTINGS


@pytest.fixture
def expansion_ini(tmp_path):
    """Scenario file for the expansion case, inverse mode."""
    path = tmp_path / "expansion.ini"
    path.write_text(
        "[material]\n"
        "C1 = 11 kPa\n"
        "C2 = 2.2e4 Pa\n"
        "density = 0.1 kg/m3\n"
        "poisson = 0.45\n"
        "\n"
        "[reference]\n"
        "R_i = 2.7 cm\n"
        "R_o = 30 mm\n"
        "\n"
        "[scenario]\n"
        "name = expansion\n"
        "mode = inverse\n"
        "target = 0.03 m\n"
        "samples = 16\n"
        "\n"
        "[output]\n"
        "mesh_resolution = 8x12\n",
        encoding="utf-8",
    )
    return path
