"""Word equations, schemas of machines, and bounded solvers."""
from .equations import Clause, EqSystem, Equation, Unknown, conjunction, format_system, parse_equation, parse_system
from .schema import EquivReport, Schema, build_system, concretize, equiv_bounded, schema_of, symbolic_outputs, system_upto
from .solvers import BudgetExceeded, NielsenResult, satisfies, solve_bounded, solve_nielsen
from .testset import TestsetReport, testset_fixpoint
