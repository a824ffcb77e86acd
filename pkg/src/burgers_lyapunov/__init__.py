"""Exact stationary solutions and Lyapunov exponents for viscous Burgers.

``u_t + u u_x = nu u_xx`` on ``[0, l]`` with ``u(0) = A``, ``u(l) = B``.
"""

from .exceptions import (
    CertificationError,
    NumericalError,
    RootBracketingError,
    SchemeError,
    SingularityError,
)
from .lyapunov import (
    LyapunovSpectrum,
    ModalSolution,
    cole_hopf_numeric,
    eval_modal_solution,
    lyapunov_exponents,
    modal_decay_curve,
    modal_solution,
)
from .model import CaseLabel, HQuantity, ProblemSpec, classify, compute_h
from .simulate import DecayReport, GridField, decay_experiment, evolve, fit_decay_rate, step
from .spectrum import (
    Branch,
    RobinCoefficients,
    SpectrumEntry,
    build_pq,
    count_interior_zeros,
    eval_eigenfunction,
    ground_state,
    hyperbolic_roots,
    spectrum,
    trig_roots,
)
from .stationary import StationaryProfile, eval_stationary, solve_stationary, stationary_residual

__version__ = "0.1.0"
