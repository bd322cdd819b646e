"""Embedding-derived seed nodes for local network alignment.

Structural node embeddings of two networks (DeepWalk, node2vec or
struct2vec walks + skip-gram with negative sampling) yield a cross-network
similarity seed list; it is linearly mixed with contextual seeds and fed
to a seed-and-extend local aligner.
"""

from .aligner import AlignParams, Alignment, build_alignment, conserved_edges
from .embed import EmbeddingMatrix, TrainConfig, extract_pairs, gradient, sgns_pair_loss, train
from .errors import DomainError, ParseError, SeedAlignError, StageError, TrainingError, ValidationError
from .graph import Graph, UnionGraph, degree, disjoint_union, load_edge_list, read_edge_list
from .metrics import GroundTruth, edge_correctness, node_correctness, seed_hit_rate
from .mixer import MixConfig, mix, validate_contextual
from .seeds import SeedList
from .similarity import adjacency_baseline, build_seed_list, normalized_cosine
from .structsim import (
    build_context_graph,
    degree_ring,
    dtw_cost,
    struct2vec_walks,
    structural_distance,
    structural_hierarchy,
)
from .walks import WalkCorpus, WalkParams, node2vec_transition, node2vec_walks, uniform_walks

__version__ = "0.1.0"
