import csv
import sys
import warnings
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from fracdisp.errors import SpectralLeakageWarning, SupportTruncationWarning

warnings.filterwarnings("ignore", category=SupportTruncationWarning)
warnings.filterwarnings("ignore", category=SpectralLeakageWarning)

FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def ml_fixture_rows():
    """Frozen oracle values: list of (alpha, z, expected, digits)."""
    rows = []
    with open(FIXTURES / "ml_reference_values.csv", newline="") as fh:
        for rec in csv.DictReader(fh):
            z = complex(float(rec["re_z"]), float(rec["im_z"]))
            val = complex(float(rec["re_E"]), float(rec["im_E"]))
            rows.append((float(rec["alpha"]), z, val, int(rec["digits"])))
    return rows


@pytest.fixture(scope="session")
def gaussian1d():
    from fracdisp.estimates import gaussian_profile
    return gaussian_profile(1)


@pytest.fixture(scope="session")
def bump1d():
    from fracdisp.estimates import bump_profile
    return bump_profile(1, 0)


@pytest.fixture(scope="session")
def lowpass1d():
    from fracdisp.estimates import lowpass_profile
    return lowpass_profile(1)


@pytest.fixture(scope="session")
def cutoff():
    from fracdisp.freq import build_cutoff
    return build_cutoff()


def pytest_configure(config):
    np.seterr(all="ignore")
