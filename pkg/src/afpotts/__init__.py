"""Three-state antiferromagnetic Potts model on Z^d: sampling, breakups and their combinatorics."""

from .breakup import FourSection, breakup, breakup_around_set
from .glauber import SamplerConfig, run
from .lattice import INFINITY, Direction, Region, Window
from .model import BoundaryCondition, Coloring, box_domain, exact_gibbs, named_domain
from .transform import invert_transform, transform

__all__ = [
    "BoundaryCondition", "Coloring", "Direction", "FourSection", "INFINITY", "Region", "SamplerConfig",
    "Window", "box_domain", "breakup", "breakup_around_set", "exact_gibbs", "invert_transform",
    "named_domain", "run", "transform",
]
__version__ = "0.1.0"
