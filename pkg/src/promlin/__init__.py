"""Promise equation templates over finite monoids."""
from .algebra import (AlgebraError, Group, Monoid, PartialHom, Semigroup, SubAlgebra, ab_preorder, div_preorder,
                      enumerate_extending_homs, is_regular, quotient_semilattice)
from .classify import ClassificationResult, Obstruction, Verdict, classify, classify_group_template, classify_monoid_template
from .eqsys import (EquationSystem, Fix, GeneralSystem, Mul, PromiseTemplate, RelationalStructure, brute_force_solve,
                    check_promise_solution, normalize, system_to_structure)
from .minion import MinionElement, enumerate_minion, minor, relevant_coordinates
from .reduce import (Digraph, SigmaPlus, build_band, build_edge_band, digraph_to_equations, equations_to_digraph,
                     extended_digraph_reduce)
from .relax import build_relaxation, decide_aip, decide_blp, decide_blp_aip
from .solve import PromiseViolated, SolveReport, solve_promise

__version__ = "0.1.0"
