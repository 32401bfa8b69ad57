"""Classical and directed Q-analysis of directed flag complexes."""

from qflag._kernels import BACKEND
from qflag.digraph import Digraph, load_adjacency_matrix, load_digraph, load_edge_list
from qflag.errors import (
    AugmentationInfeasible,
    CeilingExceeded,
    DigraphFormatError,
    EmptyConnectivityError,
    InvariantViolation,
    QFlagError,
)
from qflag.flagcomplex import (
    EMPTY_FACE,
    DirectedFlagComplex,
    build_complex,
    face,
    face_hat,
    is_face,
    simplex_counts,
)
from qflag.paths import (
    SimplicialPath,
    augment_path,
    longest_condensation_path,
    longest_simplicial_path,
    path_fraction,
)
from qflag.qclassic import (
    INFINITE,
    QGraph,
    StructureVectors,
    build_q_graph,
    clique_communities,
    eccentricity,
    face_poset,
    incidence_complexes,
    pseudomanifold_check,
    q_components,
    q_near,
    shared_face_matrix,
    structure_vectors,
)
from qflag.qdirected import (
    Condensation,
    ConnectionSpec,
    ConnectivityDigraph,
    build_connectivity_digraph,
    condense,
    directed_pseudomanifold_check,
    directed_q_near,
    first_structure_map,
)
from qflag.simplicial import SimplicialComplexView
from qflag.topology import ChainComplexZ2, Poset, betti_z2, order_complex, poset_height

__version__ = "0.1.0"

__all__ = [
    "AugmentationInfeasible",
    "BACKEND",
    "CeilingExceeded",
    "ChainComplexZ2",
    "Condensation",
    "ConnectionSpec",
    "ConnectivityDigraph",
    "Digraph",
    "DigraphFormatError",
    "DirectedFlagComplex",
    "EMPTY_FACE",
    "EmptyConnectivityError",
    "INFINITE",
    "InvariantViolation",
    "Poset",
    "QFlagError",
    "QGraph",
    "SimplicialComplexView",
    "SimplicialPath",
    "StructureVectors",
    "augment_path",
    "betti_z2",
    "build_complex",
    "build_connectivity_digraph",
    "build_q_graph",
    "clique_communities",
    "condense",
    "directed_pseudomanifold_check",
    "directed_q_near",
    "eccentricity",
    "face",
    "face_hat",
    "face_poset",
    "first_structure_map",
    "incidence_complexes",
    "is_face",
    "load_adjacency_matrix",
    "load_digraph",
    "load_edge_list",
    "longest_condensation_path",
    "longest_simplicial_path",
    "order_complex",
    "path_fraction",
    "poset_height",
    "pseudomanifold_check",
    "q_components",
    "q_near",
    "shared_face_matrix",
    "simplex_counts",
    "structure_vectors",
]
