from .problem import (LOWER, UPPER, BudgetExhausted, EvaluationBudget, Objective,
                      ProblemId, ProblemInstance, evaluate, instantiate, target_precision)

__all__ = ["LOWER", "UPPER", "BudgetExhausted", "EvaluationBudget", "Objective",
           "ProblemId", "ProblemInstance", "evaluate", "instantiate", "target_precision"]
