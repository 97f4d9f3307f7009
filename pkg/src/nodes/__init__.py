from .initializer_node import InitializerNode
from .alice_node import AliceNode
from .bob_node import BobNode
from .referee_node import RefereeNode
from .finalize_node import FinalizeNode

__all__ = [
    "InitializerNode",
    "AliceNode",
    "BobNode",
    "RefereeNode",
    "FinalizeNode",
]
