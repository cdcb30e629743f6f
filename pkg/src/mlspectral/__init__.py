"""Spectral clustering of multi-layer graphs via joint spectra."""
from .baselines import (BaselineKind, kernel_kmeans, kernel_kmeans_sum, sc_al, sc_sum,
                        summed_spectral_kernel)
from .exceptions import (ConfigError, DimensionMismatch, EigenFailure, InvalidGraph,
                         LengthMismatch, MLSpectralError, NoConvergence, ParseError,
                         SingularInit)
from .ged import GedProblem, GedSolution, GedSolverConfig, cluster_ged, run_ged, solve_ged
from .graph import (LaplacianKind, LayerGraph, MultiLayerGraph, assemble_multilayer,
                    laplacian, load_labels, load_layer, save_labels, save_layer)
from .metrics import MetricReport, confusion_matrix, evaluate, nmi, purity, rand_index
from .spectral import (Clustering, Embedding, KMeansConfig, SpectralDecomposition,
                       decompose, embed, kmeans, spectral_cluster)
from .sr import SrConfig, SrResult, cluster_sr, combine_pair, propagate, solve_sr
from .synth import LayerSpec, MsbmConfig, complementary_pair, generate

__version__ = "0.1.0"
