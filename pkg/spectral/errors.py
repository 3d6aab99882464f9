"""
Errors raised by the spectral estimators.
"""


class QuadratureBudgetExceeded(ValueError):
    """A correlation evaluation would record more crossings than the budget allows."""

    def __init__(self, estimated: float, budget: float):
        self.estimated = estimated
        self.budget = budget
        super().__init__(
            f"Correlation quadrature needs about {estimated:.3g} crossings, budget is {budget:.3g}. "
            f"Lower T or the node counts, or raise max_crossings."
        )
