"""Entropic information, loss and noise of quantum channels and codes."""

__version__ = "0.1.0"

from .blockcoding import BlockReport, block_report, parallel_apply
from .bounds import (
    binomial_mixture_analysis,
    bound_curve,
    bound_value,
    capacity_bound_catalog,
    dual_channel_relation,
)
from .channel import (
    ChannelReport,
    QuantumChannel,
    chain,
    channel_report,
    data_processing_check,
    identity_channel,
    make_depolarizing,
    make_erasure,
    mix_channels,
    stinespring_dilation,
    unitary_channel,
)
from .classical import ClassicalChannel, Distribution, classical_block_report, classical_report
from .codes import EncodingIsometry, builtin_code, singleton_max_k, verify_erasure_code
from .errors import QVennError
from .registers import DensityState, PureState, RegisterLayout, partial_trace, purify, von_neumann_entropy
from .sidechannel import build_teleportation_model, side_channel_diagram, verify_side_channel_code
from .venn import VennDiagram3, venn3

__all__ = [name for name in dir() if not name.startswith("_")]
