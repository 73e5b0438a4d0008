"""Exact cumulant calculus for an algebra with two commutative products."""

from .cumulants import (
    expand_dual,
    expand_grouped,
    expand_ls_analogue,
    expand_ls_classical,
    expand_main,
    kappa,
    kappa_of_forest,
    kappa_of_partition,
    kappa_star,
    lhs_product,
)
from .expr import DOT, STAR, Expr, Op, Shape, Slot, generator, multiply, normalize, parse, render
from .forests import (
    Colouring,
    ReducedForest,
    colouring_sign_sum,
    enumerate_colourings,
    enumerate_reduced_forests,
    enumerate_reduced_trees,
    is_mixing_forest,
    is_strongly_mixing_forest,
    path_F,
    path_G,
    w_of_forest,
)
from .partitions import (
    enumerate_set_partitions,
    is_mixing_partition,
    is_row_partition,
    is_strongly_mixing,
)
from .sequences import UpwardSequence, enumerate_sequences, kappa_of_sequence, phi, phi_inverse
from .verify import LawReport, verify

__version__ = "0.1.0"
