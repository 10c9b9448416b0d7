"""Shape-invariant potentials in k steps as a Z_k-graded deformed oscillator."""

from .graded_fock import Convention, FockWindow, StateLabel, make_window, tower_grade
from .oscillator_algebra import (
    OperatorMatrix,
    RelationReport,
    StructureFn,
    build_grading,
    build_ladders,
    build_number,
    build_projector,
    check_algebra,
)
from .shape_invariance import (
    CoeffSet,
    SipParams,
    SpectrumMethod,
    SpectrumReport,
    StructureTable,
    choose_c0,
    coefficients,
    energy_spectrum,
    is_cyclic,
    remainder_step,
    structure_as_fn,
    structure_closed,
    structure_recursive,
    unified_remainder,
    validate,
)

__version__ = "0.1.0"
