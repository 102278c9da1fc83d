import math

import pytest

from modeguide import ProblemKind, StripConfig, Truncation, canonicalize
from modeguide.solve import find_critical_widths, find_eigenvalues

PI = math.pi


def single_cfg(a, parity="even", d=PI):
    kind = ProblemKind.SINGLE_WINDOW_EVEN if parity == "even" else ProblemKind.SINGLE_WINDOW_ODD
    return canonicalize(StripConfig(d=d, a=a, kind=kind))


def two_cfg(a, l, parity, d=PI):
    kind = ProblemKind.TWO_WINDOW_EVEN if parity == "even" else ProblemKind.TWO_WINDOW_ODD
    return canonicalize(StripConfig(d=d, a=a, l=l, kind=kind))


@pytest.fixture(scope="session")
def ground_pair():
    """Even single-window ground state at a = 1, N = 40."""
    return find_eigenvalues(single_cfg(1.0), Truncation(40))[0]


@pytest.fixture(scope="session")
def pair_sweep_small():
    """Two-window pairs at a = 1, l in {5, 9}, N = 40."""
    out = {}
    for l in (5.0, 9.0):
        lam_p = find_eigenvalues(two_cfg(1.0, l, "even"), Truncation(40))[0].lam
        lam_m = find_eigenvalues(two_cfg(1.0, l, "odd"), Truncation(40))[0].lam
        out[l] = (lam_p, lam_m)
    return out


@pytest.fixture(scope="session")
def first_critical():
    """First critical width (odd parity) with its resonance, N = 40."""
    return find_critical_widths(1, Truncation(40)).widths[0]
