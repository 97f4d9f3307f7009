from .alice import AliceStrategy, MirrorDescentAlice, StaticAlice
from .bob import BobStrategy, CliffordBob, HeavySetBob, MaxCutBob, OptimalIndicatorBob, Proposal

ALICES = {
    "mirror-descent": MirrorDescentAlice,
    "static": StaticAlice,
}

__all__ = [
    "AliceStrategy",
    "MirrorDescentAlice",
    "StaticAlice",
    "BobStrategy",
    "CliffordBob",
    "HeavySetBob",
    "MaxCutBob",
    "OptimalIndicatorBob",
    "Proposal",
    "ALICES",
]
