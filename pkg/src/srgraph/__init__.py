"""Term graph rewriting with argument separation.

The main entry points are re-exported here; see the submodules for the
full interfaces.
"""

from .terms import (Kind, Seq, Symbol, Term, app, constructor, defined, format_seq,
                    format_term, parse_seq, parse_term, var)
from .graph import (GraphBuilder, LabeledGraph, TermGraph, basic_graph,
                    check_separation_dichotomy, graph_of_term, in_tg_nrm, is_basic,
                    is_constructor_graph, isomorphic, normal_union_size, safe_paths_to,
                    subgraph, term_of, term_size, validate)
from .rules import Redex, RewriteRule, match_at
from .unfolding import UnfoldingSpec, generate_rule, skeletons, verify_unfolding
from .rewriting import RuleProvider, apply, find_redexes, reduce
from .order import Precedence, bound_G, gt, measure_G, parse_precedence
from .pint import ell_for, pint, pj
from .safe_recursion import (UNDEFINED, CompiledProgram, compile_program, compile_source,
                             direct_interpreter, evaluate, example_program, parse_program)
from .verification import (check_embedding_step, check_program_trace, check_ptas,
                           check_safe_recursive_grs, check_trace, gt_pt)
from .kernels import BACKEND

__version__ = "0.1.0"
