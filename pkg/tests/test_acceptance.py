"""Run every built-in acceptance criterion at full budget.

Each case prints its one-line verdict (run pytest with -s or look at the
captured output on failure) and fails if any sub-check missed its stated
tolerance.
"""

import pytest

from fracmass.acceptance import MANIFEST, format_outcome, run_criterion


@pytest.mark.parametrize("criterion", MANIFEST,
                         ids=[f"C{c.cid:02d}-{c.name}" for c in MANIFEST])
def test_criterion(criterion):
    outcome = run_criterion(criterion, seed=0, scale=1.0)
    print(format_outcome(outcome))
    failed = [c.name for c in outcome.checks if not c.ok]
    assert outcome.passed, (
        f"C{outcome.cid:02d} {outcome.name}: failing sub-checks {failed}; "
        f"{outcome.detail}")
