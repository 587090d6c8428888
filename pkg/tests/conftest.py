"""Shared fixtures: small worked instances with hand-checkable numbers."""

from __future__ import annotations

import pytest

from bidsearch import Instance, PlatformLandscape


@pytest.fixture
def two_platform_instance() -> Instance:
    """Marginals {0.25, 0.5, 1.125} and {0.3, 0.55, 0.925}; strict mode.

    With target 0.45 and a slack budget the critical threshold is 0.925,
    the almost-optimal strategy (2, 3), and the optimum (2 + 1/9, 3).
    """
    plat_a = PlatformLandscape((4.0, 7.0, 9.0), (1.0, 2.5, 4.75), strict=True)
    plat_b = PlatformLandscape((5.0, 8.0, 10.0), (1.5, 3.15, 5.0), strict=True)
    return Instance((plat_a, plat_b), budget=100.0, target_ros=0.45)


@pytest.fixture
def two_platform_tight_budget(two_platform_instance) -> Instance:
    """Same landscapes with a budget that binds before the ROS constraint."""
    return Instance(two_platform_instance.platforms, budget=7.6, target_ros=0.45)


@pytest.fixture
def linear_instance() -> Instance:
    """Two linear platforms; the feasible set is not downward closed.

    Platform 0 returns 8/3 value per unit cost, platform 1 returns 1:1.
    At target 1/2, the strategy (1.5, 1) is exactly feasible while the
    smaller (1, 1) is not.
    """
    plat_a = PlatformLandscape((8.0 / 3.0, 16.0 / 3.0), (1.0, 2.0))
    plat_b = PlatformLandscape((1.0, 2.0), (1.0, 2.0))
    return Instance((plat_a, plat_b), budget=10.0, target_ros=0.5)
