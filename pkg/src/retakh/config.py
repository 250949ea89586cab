"""Budgets and default orders, overridable from the environment."""
from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_BUDGET = 14
DEFAULT_ORDER = 200

BUDGET_ENV = "RETAKH_BUDGET"
ORDER_ENV = "RETAKH_ORDER"


@dataclass(frozen=True)
class Config:
    budget: int = DEFAULT_BUDGET  # largest semilength for exhaustive enumeration
    order: int = DEFAULT_ORDER  # default truncation order for series work

    @classmethod
    def from_env(cls, environ=None, budget: int | None = None, order: int | None = None) -> "Config":
        """Explicit arguments win over environment variables, which win over defaults."""
        env = os.environ if environ is None else environ
        if budget is None:
            budget = int(env.get(BUDGET_ENV, DEFAULT_BUDGET))
        if order is None:
            order = int(env.get(ORDER_ENV, DEFAULT_ORDER))
        if budget < 0 or order < 0:
            raise ValueError("budget and order must be non-negative")
        return cls(budget=budget, order=order)
