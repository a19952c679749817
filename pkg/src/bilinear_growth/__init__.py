"""Growth rates of bilinear systems: exact growth, certified bounds, and embeddings."""

from .bounds import (AtMostCertified, BoundsReport, CertificateRefusal, GradedCertificate,
                     GreaterThan, Unresolved, WeightCertificate, bounds_report, decide_threshold,
                     fekete_limit, graded_upper_bound, limit_condition_check,
                     verify_graded_certificate, verify_weight_certificate, weight_upper_bound)
from .catalog import CATALOG, golden, plus_one, zero
from .core import (BilinearMap, BilinearSystem, EmptySystemError, Leaf, MisuseError, Node,
                   SignClass, StructuralError, UnsupportedError, brute_force_g, eval_tree,
                   enumerate_trees, growth_table, parse_tree, tree_to_string)
from .patterns import (LinearPattern, best_pattern_rate, compose, lower_bound_sequence,
                       pattern_fronts, pattern_matrix, pattern_rate)
from .reductions import (EmbeddedSystem, MatrixEmbedding, embed_jsr, embed_mortality,
                         embed_positive, embed_two_ops, embed_two_seeds, find_zero_vector,
                         transform_append_one, transform_ensure_limit, transform_insert_zero_odd)
from .spectra import Enclosure, jsr_bounds, spectral_radius

__all__ = [name for name in dir() if not name.startswith("_")]
