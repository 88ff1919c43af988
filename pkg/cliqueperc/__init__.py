# cliqueperc - percolation kernel for clique-structured social-physical networks
from .analytic import (
    AnalyticSolution,
    CliqueProfile,
    MomentSet,
    build_profile,
    critical_Tf,
    critical_Tw,
    epidemic_sizes,
    fixed_point,
    jacobian,
    moments,
    single_type_solution,
    solve,
    spectral_radius,
)
from .distributions import CliqueSizeLaw, DegreeLaw, ThinnedDegreeLaw, law_from_spec, thin
from .errors import (
    CliquePercError,
    ConfigError,
    GenerationError,
    InvalidLawError,
    NetworkFormatError,
)
from .netgen import GenParams, SocialPhysicalNetwork, generate_network, read_network, write_network
from .percolate import (
    EquivalentGraph,
    PercolationOutcome,
    build_equivalent,
    percolate_once,
    run_ensemble,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticSolution",
    "CliqueProfile",
    "CliqueSizeLaw",
    "CliquePercError",
    "ConfigError",
    "DegreeLaw",
    "EquivalentGraph",
    "GenParams",
    "GenerationError",
    "InvalidLawError",
    "MomentSet",
    "NetworkFormatError",
    "PercolationOutcome",
    "SocialPhysicalNetwork",
    "ThinnedDegreeLaw",
    "build_equivalent",
    "build_profile",
    "critical_Tf",
    "critical_Tw",
    "epidemic_sizes",
    "fixed_point",
    "generate_network",
    "jacobian",
    "law_from_spec",
    "moments",
    "percolate_once",
    "read_network",
    "run_ensemble",
    "single_type_solution",
    "solve",
    "spectral_radius",
    "thin",
    "write_network",
]
