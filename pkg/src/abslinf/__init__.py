"""Exact rational engine for curved absolute L-infinity algebras."""

from .core import (AlgebraPresentation, FiniteAlgebra, QuasiFreeAlgebra, alpha_homology,
                   check_structure, gamma_eval, gauge_act, mc_verify, twisted_differential)
from .convolution import (CommutativeAlgebra, CounitalCoalgebra, convolution_algebra,
                          mapping_homotopy_groups, scalar_extension)
from .dupont import (PolyForm, dupont_homotopy, elementary_projection, verify_contraction,
                     wedge_product, whitney)
from .integration import bch, build_mc, build_mc_fixed_point, horn_fill, is_simplex
from .models import (build_model, chains_coalgebra, homotopy_groups, load_and_validate,
                     minimal_generators)
from .transfer import DecompositionTable, simplex_decomposition, transferred_operation

__version__ = "0.1.0"
