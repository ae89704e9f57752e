"""Exact workbench for BiHom-associative structures.

Scalars are exact (rationals or prime fields), every axiom system is
checked on basis tuples, and every constructive result re-verifies its
own conclusion. See the README for the file format and the CLI.
"""

from .fields import GF, QQ, Field, FieldError, FieldMismatchError, PrimeField, RationalField, Scalar, parse_scalar
from .linalg import (
    BilinearMap,
    DimensionError,
    LinMap,
    NotBijectiveError,
    Tensor2,
    Tensor2Map,
    Tensor3,
    Vector,
    contract,
    identity_plan,
    invert_map,
)
from .reports import AxiomCheck, CheckReport, ConclusionError, EquivalenceReport, HypothesisError
from .structures import (
    AlgebraData,
    CoalgebraData,
    ModuleData,
    StructureMaps,
    check_bihom_algebra,
    check_bihom_coalgebra,
    check_module,
    regular_bimodule,
    tensor_bimodule,
)
from .yangbaxter import (
    Residue,
    SearchBoundError,
    YbeInstance,
    abhybp_residue,
    check_invariance,
    embed_13,
    leg_product,
    search_solutions,
)
from .rbsystems import (
    Pseudotwistor,
    RbSystem,
    check_lemma_8_1,
    check_rb_system,
    check_thm_8_1a_unital,
    check_twistor,
    deformed_product,
    operator_from_tensor,
    rb_from_ybp,
    rb_operator_check,
    rb_systems_from_weighted_rb,
    star_product,
    star_unit,
    twistor_from_rb,
)
from .covariantbialg import (
    CovariantBialgebra,
    Derivation,
    build_from_tensors,
    check_covariant_bialgebra,
    check_derivation,
    check_prop_2_11,
    check_prop_2_17,
    check_quasitriangular,
    check_thm_2_9,
)
from .dendriprelie import (
    Dendriform,
    PairedModule,
    PreLie,
    check_dendriform,
    check_paired_module,
    check_prelie,
    check_prelie_module,
    dendriform_from_rb,
    prelie_from_rb,
    prelie_module_from_paired,
)

__version__ = "0.1.0"
