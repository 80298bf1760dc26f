# Set environment variables to tell numpy to not use multithreading
import os
os.environ['OMP_NUM_THREADS'] = '1'
os.environ['OPENBLAS_NUM_THREADS'] = '1'
os.environ['NUMEXPR_NUM_THREADS'] = '1'
os.environ['MKL_NUM_THREADS'] = '1'

# Other initialization
from xlaguerre.polycore import PolyQ, Family, ModelParams, laguerre, deforming_xi, exceptional_P, poly_eval, poly_diff, poly_add, poly_mul, poly_scale
from xlaguerre.structured import RationalQ, StructuredFn
from xlaguerre.sqm import (Prepotential, Hamiltonian, EigenState, prepotential_W0, prepotential_Wl_deformed, prepotential_Wl_dc,
                           hamiltonian, potential_eval, susy_apply, eigensystem_deformed, eigensystem_dc_pair, residual_check,
                           PartnerMatch, dc_partner_states)
from xlaguerre.dirac import (CouplingKind, SusyPhase, CouplingProfile, DiracSpectrum, DiracState, vector_potential_deformed,
                             vector_potential_dc, vector_potential_classical, pauli_central, pauli_cylindrical, dirac_spectrum,
                             dirac_state, scalar_1d)
from xlaguerre.fokker import FPModel, FPSolution, GridDensity, fp_from_prepotential, fp_expand, fp_evolve, fp_oracle_cn
from xlaguerre.numerics import Quadrature, FDHamiltonian, gauss_quad, fd_eigs
from xlaguerre.verify import Verifier, CheckResult
from xlaguerre.cli import RunConfig
from xlaguerre.exceptions import (ParameterRangeError, SingularDeformationError, UnimplementedBranchError, NonNormalizableError,
                                  QuadratureNotConvergedError, SturmCountError, TruncationNotConvergedError, NonFiniteSolutionError)
