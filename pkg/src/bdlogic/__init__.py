"""Bilattice-style constructive logics with strong negation: syntax, semantics and proofs."""

__version__ = "0.1.0"

from .syntax import Formula, ParseError, parse, reduce, reduce_dn4, render  # noqa: E402
from .verdict import Status, Verdict  # noqa: E402
from .kripke import KripkeModel, LogicId, countermodel_search, force, validate  # noqa: E402
from .matrices import (  # noqa: E402
    DunnModel, DunnValue, FourValue, ThreeValue, consequence_four, consequence_g3, dunn_consequence,
    eval_dunn, eval_four, eval_g3, nontrivial_eval,
)
from .star import StarModel, dunn_to_star, star_consequence_bounded, star_force  # noqa: E402
from .hilbert import Proof, ProofBuilder, axiom_set, bounded_derive, check_proof  # noqa: E402
from .bridge import compare_semantics, slash  # noqa: E402

__all__ = [
    "Formula", "ParseError", "parse", "reduce", "reduce_dn4", "render", "Status", "Verdict",
    "KripkeModel", "LogicId", "countermodel_search", "force", "validate", "DunnModel", "DunnValue",
    "FourValue", "ThreeValue", "consequence_four", "consequence_g3", "dunn_consequence", "eval_dunn",
    "eval_four", "eval_g3", "nontrivial_eval", "StarModel", "dunn_to_star", "star_consequence_bounded",
    "star_force", "Proof", "ProofBuilder", "axiom_set", "bounded_derive", "check_proof",
    "compare_semantics", "slash",
]
