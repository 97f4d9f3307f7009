from typing import Any, List, Optional, TypedDict, Annotated
from typing_extensions import Required
import operator

from .engines import DensePmf, Witness
from .models import GameConfig, GameTranscript, RoundRecord


class InputState(TypedDict, total=False):
    """
    Input state for one verification game.

    Attributes:
        config: Game parameters (eps, delta, round cap, referee mode)
        target: Bob's exact output distribution nu
        alice: Alice's strategy object
        bob: Bob's strategy object
        seed: Run seed; every random draw is keyed by (seed, round, side)
    """

    config: Required[GameConfig]
    target: Required[DensePmf]
    alice: Required[Any]
    bob: Required[Any]
    seed: Required[int]
    target_label: str
    output_dir: Optional[str]


class GameState(InputState):
    """
    Complete state of a verification game between Alice (learner) and Bob (device owner).
    """

    t: Annotated[int, lambda x, y: y]
    """Number of the round in progress (1-based once Alice has disclosed)"""

    round_cap: int
    """Rounds allowed before the game is declared round-cap-reached"""

    initial_divergence: float
    """D(nu || U) in nats"""

    guess: Annotated[Any, lambda x, y: y]
    """Alice's disclosed distribution (a GibbsGuess or a static DensePmf)"""

    pending_witness: Annotated[Optional[Witness], lambda x, y: y]
    """Accepted witness Alice must absorb before her next disclosure"""

    witness: Annotated[Optional[Witness], lambda x, y: y]
    """Bob's proposal for the current round; None means he concedes"""

    claimed_gap: Annotated[Optional[float], lambda x, y: y]
    """Gap E_mu(f) - E_nu(f) Bob claims for his proposal"""

    history: Annotated[List[Witness], operator.add]
    """Every witness Bob has proposed, in round order"""

    rounds: Annotated[List[RoundRecord], operator.add]
    """Round records for the transcript"""

    outcome: Annotated[Optional[str], lambda x, y: y]
    """Set once the game is decided"""

    transcript: Optional[GameTranscript]
    """Assembled by the finalizer"""

    # Process tracking
    current_step: Annotated[str, lambda x, y: y]  # Take the latest step
    """Current step in the game"""

    next_steps: Annotated[List[str], operator.add]  # Combine lists
    """List of steps to execute next"""

    errors: Annotated[List[str], operator.add]  # Combine error lists
    """List of errors encountered during the game"""
