"""Cayley-graph hamiltonicity toolkit for small finite groups.

Builds concrete group arithmetic from structured specs, searches and verifies
hamiltonian cycles, lifts quotient cycles through cyclic normal subgroups, and
reproduces the complete order-150 sweep from a bundled certificate corpus.
"""

from __future__ import annotations

from .autos import automorphism_group, find_isomorphism, is_isomorphic
from .cayley import CayleyGraph, GeneratorSet, build_cayley, generator_set
from .certs import (
    Certificate,
    CertificateError,
    emit_certificate,
    make_certificate,
    parse_certificate,
)
from .corpus import enumerate_groups, lint_corpus, load_corpus
from .groups import (
    Cyclic,
    Dihedral,
    DirectProduct,
    GroupError,
    MatrixAction,
    Semidirect,
    UnitAction,
    center,
    derived_subgroup,
    generated_subgroup,
    group_order,
    is_normal,
    sylow_subgroup,
)
from .hamilton import (
    BudgetExceeded,
    Walk,
    find_hamiltonian_cycle,
    find_hamiltonian_path,
    verify_hamiltonian_cycle,
)
from .quotient import (
    LiftRefused,
    double_edge_lift,
    fgl_lift,
    make_quotient,
    verify_quotient_cycle,
    voltage,
)
from .spectext import PRESETS, format_group_spec, parse_group_spec
from .strategies import (
    CaseLabel,
    classify,
    companion_instance,
    build_parametric_walk,
    minimal_generating_sets,
    normalize_genset,
    produce_certificate,
    reproduce_order_150,
)

__version__ = "0.1.0"
