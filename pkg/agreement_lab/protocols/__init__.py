from .agreement import (
    ProtocolId,
    ProtocolSpec,
    OneResilientProtocol,
    WaitFreeBridgedProtocol,
    psi_path,
    psi_center,
    make_one_resilient,
    make_wait_free_bridged,
    make_protocol,
    protocol_metadata,
)
from .reduction import (
    Reduction,
    ReductionSchedule,
    ReductionResult,
    make_reduction,
    reduction_two_set,
)

__all__ = [
    'ProtocolId',
    'ProtocolSpec',
    'OneResilientProtocol',
    'WaitFreeBridgedProtocol',
    'psi_path',
    'psi_center',
    'make_one_resilient',
    'make_wait_free_bridged',
    'make_protocol',
    'protocol_metadata',
    'Reduction',
    'ReductionSchedule',
    'ReductionResult',
    'make_reduction',
    'reduction_two_set',
]
