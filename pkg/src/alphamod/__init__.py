"""Alpha-modulation spaces and pseudodifferential operators of class S^0_{alpha,alpha}.

The modules build on one another:

``cover``    alpha-coverings, their partitions of unity and plateau bumps
``grid``     periodic sampling grids, FFT conventions and L^p quasi-norms
``spaces``   M^{s,alpha}_{p,q} quasi-norms, the Bessel lift and embeddings
``symbols``  symbol classes, seminorms and the library of test symbols
``psido``    quantisation sigma(X, D) and the (l, m) symbol decomposition
``harness``  exponent-fitting experiments and report emission
"""

from .cover import AlphaCover, CoverParams, make_cover, verify_cover
from .grid import Grid, GridSignal, Spectrum, fft, ifft, lp_norm
from .harness import (
    BoundednessSetup,
    ExperimentReport,
    emit_report,
    exp_boundedness,
    exp_counterexample,
    exp_embedding,
    exp_lift,
    plan_grid,
)
from .psido import decompose, quantize_apply
from .spaces import QuasiNormParams, alpha_norm, alpha_norm_equiv, bessel_lift, embedding_check
from .symbols import (
    CounterexampleParams,
    Symbol,
    constant,
    make_counterexample,
    make_modulated_family,
    seminorm,
)

__version__ = "0.1.0"
