"""Infinitary derivations with the w-rule and the progression rule."""

from .core import (AXIOM_TRUE, AXIOM_X, CONJ, CUT, DISJ, PROG, DerivationError,
                   InfDerivation, InfViolation, ProbePlan, follow, has_cut,
                   local_check, mk_axiom, mk_conj, mk_cut, mk_disj, mk_prog,
                   probe_paths, weaken)
from .transform import (RankCertificate, cut_elim_full, cut_elim_step, invert,
                        o_function, rank_extract, reduce, same_value_replace)
from .constructions import (assemble_ti, derive_equality_axiom_x,
                            derive_excluded_middle, derive_induction,
                            derive_prog, derive_ti, derive_truth, embed_fin,
                            equality_axiom_x, induction_axiom, lhd_formula,
                            lhd_rank, omega_rule_numerals, prog_formula,
                            ti_formula)
