"""Outage analytics and relay beamforming for a two-cell downlink with ARQ.

Two base stations serve one user each on the same resource, a shared
multi-antenna relay handles retransmissions. The package provides the
closed-form outage probabilities of the interference-limited direct
links, optimal relay beamformers for the single-user and two-user
retransmission modes, and a Monte Carlo engine that reproduces the
system-level outage experiments.
"""

from .channel import (CTX_DIRECT, CTX_GENERIC, CTX_RELAY, ChannelRealization,
                      SystemConfig, draw_bs_channels, draw_channels,
                      draw_relay_channels, substream)
from .errors import (ContractViolationError, DegenerateInputError,
                     DimensionError, NotRankOneError, NumericFailureError,
                     RelayArqError, UnsupportedOrderError)
from .linalg import HermitianEig, conjT, herm_eig, kron_identity, null_basis, unvec, vec
from .outage import (DiffExpPdfParams, arq_outage, cdf_diff_exp_n3,
                     cf_inversion_cdf, cf_inversion_outage,
                     characteristic_function, diff_exp_params,
                     outage_interference_n3, outage_single_user,
                     pdf_diff_exp_n3)
from .relay_multi import (MultiBeamformer, RankReduction, RankReductionState,
                          extract_beamformer, max_min_sinr, rank_reduce,
                          reduce_dimension, reduce_instance,
                          sum_diagonal_blocks)
from .relay_single import (Beamformer, beamform_gain, optimal_gain,
                           rate_protected, rate_target,
                           solve_single_user_beamformer,
                           solve_single_user_beamformer_full)
from .sdp import SdpInstance, SdpOutcome, solve_feasibility
from .simulate import (ExperimentTable, OutageEstimate, RelayEstimate,
                       TrialOutcome, run_experiment, run_relay_trial,
                       simulate_direct, simulate_relay)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
