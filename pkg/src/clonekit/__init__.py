"""Exact computation with clones of functions on a finite carrier.

Clone slices, invariant sets and polymorphisms, cylinder decompositions,
richness conditions, Boolean class identification and the characteristic
of symmetric conservative clones, with verifiers that cross-check them.
"""

from types import ModuleType

from clonekit.catalog import CloneCatalogEntry, builtin_catalog, catalog_entry
from clonekit.characteristic import (
    Characteristic,
    NTupleRelation,
    arity_parameter,
    case_of,
    characteristic,
    chi_difference,
    chi_equal,
    classify_case,
    relation_D,
    relation_R,
)
from clonekit.clone import (
    ArityVerdict,
    FunctionSet,
    GeneratorSet,
    TraceSet,
    clone_slices,
    contains,
    is_symmetric,
    projected_traces,
    restrict_generators,
    slice,
    symmetric_closure,
)
from clonekit.conditions import (
    DeltaReport,
    delta_2,
    delta_partial,
    delta_s,
    klein_rank2_slice,
    special_relation,
    triangle_case,
    triangle_rel,
    uv_pair,
)
from clonekit.core import (
    CellFamily,
    FiniteFunction,
    Permutation,
    classify_function,
    compose,
    conjugate,
    identify_vars,
    is_conservative,
    projection,
)
from clonekit.decomposition import (
    SubsetFamily,
    decomposition_apply,
    index_families,
    is_decomposable,
    strongly_separates,
    weakly_separates,
)
from clonekit.errors import CapacityError, InputError, PremiseError
from clonekit.galois import QSet, enumerate_inv, in_inv, invariant_closure, pol_bounded, preserves
from clonekit.kernels import BACKEND
from clonekit.post import PostClassId, identify_generated, identify_post_class, pi_family, pi_zero
from clonekit.verify import (
    VerificationReport,
    chi_injectivity_check,
    oracle_in_inv,
    verify_decomposition_theorem,
    verify_lemma_suite,
    verify_main,
)

__version__ = "0.1.0"

__all__ = sorted(
    name for name, value in globals().items() if not name.startswith("_") and not isinstance(value, ModuleType)
)
