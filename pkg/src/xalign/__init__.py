"""Interference-alignment simulators and sum-DoF calculators for X networks
with local, temperately-delayed CSIT.

The package runs three transmission schemes symbol-exactly over seeded
block-fading realizations (two-user MIMO X, K-user SISO X, M x N MISO X),
counts decoded symbols per channel use, and evaluates the matching
piecewise-linear trade-off regions in exact rational arithmetic.
"""

from .channel import (
    ChannelProcess,
    CsitAccess,
    CsitView,
    NetworkConfig,
    SlotSet,
    derive_seed,
    process_from_json,
    received_signal,
    sample_network,
    schedule_slot_sets,
)
from .dof import (
    Table1Row,
    TradeoffPoint,
    asymptotic_dof_t1,
    asymptotic_dof_t3,
    corollary1_region,
    sample_region,
    scale_dof,
    table1_row,
    theorem1_region,
    theorem2_region,
    theorem3_region,
    timeshare,
)
from .errors import (
    ConfigurationError,
    DegenerateChannelError,
    NotReadyError,
    SchedulingError,
    SingularMatrixError,
    UnsupportedCaseError,
)
from .linalg import cond_estimate, det, rank_tol, solve_square
from .misox import MisoxConfig, MisoxPayload, decode_misox_receiver, misox_network, run_misox
from .precoding import (
    Precoder,
    ZeroPattern,
    czp_pattern,
    czp_precoder,
    misox_precoder,
    scalar_ratio_precoder,
)
from .records import DecodeReport, Transcript
from .ria import (
    RiaPayload,
    RiaPlan,
    SideInfo,
    decode_ria_receiver,
    plan_ria,
    reconstruct_side_info,
    ria_network,
    run_ria,
)
from .stia2 import (
    Stia2Config,
    Stia2Payload,
    decode_stia_receiver,
    run_stia_two_user,
    stia2_network,
    stia_case,
)

__version__ = "0.1.0"
