"""Metric polyratios on finitely ramified self-similar fractals.

The fractal is described combinatorially (cell count, boundary count, glue
rules).  ``check_up`` decides whether a polyratio admits a self-similar
distance and returns an exactly verifiable certificate; ``metric`` holds the
finite-level distances and scaling reports.
"""
from .catalog import BUILTIN_NAMES, builtin, closed_form_metric
from .checker import (MetricStatus, ProvenNotUP, ProvenUP, Undecided, check_up, dp_iterate,
                      metric_verdict, phi_apply, verify_certificate, verify_notup_certificate,
                      verify_up_certificate)
from .fractal import (FractalSpec, SpecError, VertexId, canonicalize, cell_vertices, parse_spec,
                      validate_spec, vertex_count)
from .graph import build_level_graph, cell_diameter, connectedness, shortest_distance, to_dot
from .metric import chain_distance, compare_path_chain, path_distance, scaling_report
from .paths import (H, PathRecord, enumerate_strict_paths, hat_sigma, insert, transfer_apply,
                    transfer_matrix)
from .rational import polyratio

__version__ = "0.1.0"
