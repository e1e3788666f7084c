"""cayleybench: finite-scale workbench for Cayley-ball geometry.

Group models with computable normal forms, word-metric ball enumeration,
peripheral-coset triangle centers and their decompositions, sphere-restricted
convolution constants, and triangle-center maps with exhaustive verification.
"""

from .balls import BallIndex, DEFAULT_BALL_BUDGET, enumerate_ball, growth_function
from .bestconst import (BestConstantEstimate, RdProfile, best_constant, brute_constant,
                        rd_profile)
from .cache import load_ball, save_ball
from .chain import (ChainReport, ChainWorkspace, complex_reduction_check,
                    fit_chain_constants, trace_proof_chain)
from .config import ExperimentConfig, load_config, validate_config
from .decomp import (CentralDecomposition, DecompositionIndex, central_decompositions,
                     count_bound_fit, decomposition_index)
from .errors import (AlphabetError, CacheIntegrityError, ConfigError, GeodesicRangeError,
                     GridDimensionError, ModelMismatchError, PeripheralError,
                     ResourceBudgetError, WorkbenchError)
from .functions import FiniteFunction, convolve, restrict_sphere
from .groups import (Cyclic, DirectProduct, Element, Free, FreeAbelian, FreeProduct,
                     GroupModel, all_geodesic_words, family_str, inverse, multiply,
                     normalize, parse_family, word_length)
from .opnorm import op_norm_lower, op_norm_matrix
from .peripherals import Coset, PeripheralStructure, PeripheralSubgroup, peripheral_structure
from .polynomials import PolynomialBound, assemble_p
from .reports import emit_report, report_csv_bytes, report_json_bytes
from .runner import get_ball, run_experiment
from .tmaps import (TMap, TMapReport, TMapValue, make_tmap, make_tmap_from_star,
                    make_tmap_polygrowth, make_tmap_z2, verify_tmap)
from .triangles import (CentralCosetHit, EntryExitRecord, StarConstants, calibrate_constants,
                        calibrate_with_table, entrance_exit, find_central_coset, verify_star)

__version__ = "0.1.0"
