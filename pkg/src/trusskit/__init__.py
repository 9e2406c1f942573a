from __future__ import annotations

from trusskit.config import Settings, get_settings, use_settings
from trusskit.constructions import (
    EndoElement,
    SemidirectProduct,
    alpha_truss,
    conjugation_map,
    constant_truss,
    endo_pair_truss,
    endomorphism_subtruss,
    endomorphism_truss,
    mapping_truss,
    matrix_truss,
    semidirect_truss,
    subset_semidirect_truss,
)
from trusskit.document import StructureDocument, dumps, load, save
from trusskit.errors import AxiomError, TrussKitError
from trusskit.heap import FiniteHeap, HeapMorphism, SubHeap, build_heap
from trusskit.module import (
    BimodulePair,
    ModuleMorphism,
    TrussModule,
    ZActionModule,
    build_module,
    hom_set,
    induced_action,
    quotient_module,
    regular_module,
    z_action_module,
)
from trusskit.truss import (
    FiniteTruss,
    TrussMorphism,
    build_truss,
    classify_subheap,
    enumerate_substructures,
    quotient_truss,
    special_elements,
)
from trusskit.ztruss import (
    ZAuto,
    ZTrussParams,
    canonicalize,
    classify_special,
    type3_structures,
    zn_enumerate_all,
    zn_truss,
)

__all__ = [
    "Settings",
    "get_settings",
    "use_settings",
    "AxiomError",
    "TrussKitError",
    "FiniteHeap",
    "HeapMorphism",
    "SubHeap",
    "build_heap",
    "FiniteTruss",
    "TrussMorphism",
    "build_truss",
    "classify_subheap",
    "enumerate_substructures",
    "quotient_truss",
    "special_elements",
    "EndoElement",
    "SemidirectProduct",
    "alpha_truss",
    "conjugation_map",
    "constant_truss",
    "endo_pair_truss",
    "endomorphism_subtruss",
    "endomorphism_truss",
    "mapping_truss",
    "matrix_truss",
    "semidirect_truss",
    "subset_semidirect_truss",
    "ZAuto",
    "ZTrussParams",
    "canonicalize",
    "classify_special",
    "type3_structures",
    "zn_enumerate_all",
    "zn_truss",
    "BimodulePair",
    "ModuleMorphism",
    "TrussModule",
    "ZActionModule",
    "build_module",
    "hom_set",
    "induced_action",
    "quotient_module",
    "regular_module",
    "z_action_module",
    "StructureDocument",
    "dumps",
    "load",
    "save",
]
