"""Acceptance suite: one pass/fail line per shipped criterion.

Runs the same checks as `schwarzian verify all`, each at its contractual
tolerance, against the default seed.
"""

import pytest

from schwarzian.sturm import DEFAULT_SEED
from schwarzian.verify import ALL_CHECKS, run_all

_RESULTS = None


def results():
    global _RESULTS
    if _RESULTS is None:
        _RESULTS = {r.name: r for r in run_all(seed=DEFAULT_SEED)}
    return _RESULTS


@pytest.mark.parametrize("name", [check.__name__.removeprefix("check_") for check in ALL_CHECKS],
                         ids=lambda n: n)
def test_criterion(name):
    lookup = {
        "schwarzian_closed_forms": "schwarzian_closed_forms",
        "norm_estimates": "norm_estimates",
        "bounded_census": "bounded_schwarzian_census",
        "growth_pipeline": "growth_pipeline",
        "sturm_segments": "sturm_segments",
        "legendre_counts": "legendre_zero_counts",
        "disk_geometry": "disk_geometry",
        "harmonic_layer": "harmonic_layer",
        "qualitative_note": "qualitative_coverage_note",
    }
    result = results()[lookup[name]]
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] {result.name}: measured={result.measured:.3e} "
          f"tol={result.tolerance:.1e} ({result.detail})")
    assert result.passed, f"{result.name}: {result.detail}"
