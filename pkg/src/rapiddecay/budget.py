"""Element-count budgets for desk-scale enumeration."""

import os

DEFAULT_BUDGET = 5_000_000
BUDGET_ENV = "RAPIDDECAY_BUDGET"


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration passes its element cap.

    This marks a desk-scale limit, not a mathematical failure.
    """

    def __init__(self, what, cap, reached=None):
        self.what = what
        self.cap = cap
        self.reached = reached
        msg = f"{what}: budget of {cap} elements exceeded"
        if reached is not None:
            msg += f" (reached {reached})"
        super().__init__(msg)


def default_budget():
    value = os.environ.get(BUDGET_ENV)
    if value:
        return int(float(value))
    return DEFAULT_BUDGET
