"""Generalized Vicsek fractals: Wiener index and mean first-passage time."""
from .closed_form import (ClosedFormParams, ClosedFormReport, ScalingReport,
                          delta_series, eval_printed_formulas, mfpt_closed,
                          mfpt_from_wiener, scaling_exponents, wiener_closed,
                          wiener_one_step, wiener_recursive)
from .fractal import (FractalGraph, generate, single_seed, spider_seed,
                      star_seed, vertex_count, vicsek_step)
from .spectral import (decimate_eigenvalue, eval_ap5_sums, laplacian,
                       mfpt_eigen, pseudoinverse_hitting, spectrum)
from .tree import (Graph, Tree, average_path_length, bfs_distances,
                   validate_tree, wiener_brute, wiener_fast_tree)
from .walks import (hitting_times_solve, hitting_times_tree, mc_first_passage,
                    mc_mfpt, mfpt_oracle)

__version__ = "0.1.0"
