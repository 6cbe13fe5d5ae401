"""cantorspec: Dirichlet-weight branching processes, random Cantor strings,
and the CLT / no-CLT structure of their Dirichlet-Laplacian spectra."""

__version__ = "0.1.0"

from .errors import (ApplicabilityError, BudgetError, CantorSpecError,
                     ConvergenceError, DomainError, MultiplicityError,
                     PoleError, ToleranceError)
from .gbp import (CutSet, Individual, WeightSpec, covering_count,
                  grow_cut_set, martingale_value, replicate_rng,
                  sample_simplex)
from .renewal import (CharacteristicPolynomial, Regime, RenewalSpectrum,
                      characteristic_polynomial, classify_regime, f_transform,
                      moments, phase_grid, psi, psi_prime, renewal_tail,
                      spectral_roots)
from .strings import (CltSample, CltSummary, GapString, box_counting_dimension,
                      clt_experiment, count_eigenvalues, estimate_frak_N,
                      generate_gaps, nbar)
from .rconst import RCertificate, compute_R, f_bound, s_tilde_moment, series_term
from .crt import crt_martingale_check, crt_weight_spec, entropy_moment, psi_crt

__all__ = [
    "__version__",
    "ApplicabilityError", "BudgetError", "CantorSpecError", "ConvergenceError",
    "DomainError", "MultiplicityError", "PoleError", "ToleranceError",
    "CutSet", "Individual", "WeightSpec", "covering_count", "grow_cut_set",
    "martingale_value", "replicate_rng", "sample_simplex",
    "CharacteristicPolynomial", "Regime", "RenewalSpectrum",
    "characteristic_polynomial", "classify_regime", "f_transform", "moments",
    "phase_grid", "psi", "psi_prime", "renewal_tail", "spectral_roots",
    "CltSample", "CltSummary", "GapString", "box_counting_dimension",
    "clt_experiment", "count_eigenvalues", "estimate_frak_N", "generate_gaps",
    "nbar",
    "RCertificate", "compute_R", "f_bound", "s_tilde_moment", "series_term",
    "crt_martingale_check", "crt_weight_spec", "entropy_moment", "psi_crt",
]
