import itertools
from pathlib import Path

import pytest

from ringca.debruijn import next_configuration

DATA = Path(__file__).parent / "data"

# recurring 3-state rules
FLOW_RULE = "120021120021021120021021210"        # left 18, right 10
STRATEGY_I_SAMPLE = "211212112020000020102121201"  # right 18, left 12
STRATEGY_II_SAMPLE = "102012102012102102021021012"  # left 18, right 12
REJECTED_FILTER_RULE = "102012210120021021012102120"

PERMUTATION_RULES = [
    "8572036419", "3154968072", "1632405789", "5102847369", "1973502846",
    "7028415369", "1592407368", "2469587301", "8135940672", "0271584936",
    "9821354706", "6924135087", "5983076412", "4319256807", "9837205146",
]


def brute_force_reversible(rule, n):
    """Oracle: is the global map a bijection at ring size n?

    Enumerates all d^n configurations and applies the rule directly,
    cell by cell; injectivity on a finite set equals bijectivity.
    """
    seen = set()
    for cells in itertools.product(range(rule.d), repeat=n):
        image = next_configuration(rule, cells)
        if image in seen:
            return False
        seen.add(image)
    return True


@pytest.fixture(scope="session")
def second_approach_rules():
    lines = (DATA / "good_rules_second_approach.txt").read_text().split()
    assert len(lines) == 122
    return lines
