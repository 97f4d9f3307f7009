import logging

from ..engines import DensePmf, relative_entropy
from ..engines.mirror import iteration_cap, worst_case_divergence
from ..models import Outcome, RoundRecord, Verdict
from ..state import GameState

logger = logging.getLogger(__name__)


class InitializerNode:
    """Node for setting up a verification game: Alice's opening guess and the round cap."""

    def __init__(self):
        """Initialize the initializer node."""
        pass

    def run(self, state: GameState) -> dict:
        """Open the game with Alice's initial guess (uniform for the built-in strategies)."""
        config = state["config"]
        target = state["target"]
        n = target.width
        label = state.get("target_label", "target")

        logger.info(f"🎯 Starting verification game on {label} (n={n}, eps={config.eps}, delta={config.delta})")
        print(f"🎯 Starting verification game on {label} (n={n}, eps={config.eps})")

        initial_divergence = relative_entropy(target, DensePmf.uniform(n))
        round_cap = config.round_cap or max(1, iteration_cap(worst_case_divergence(n), config.eps))
        update = {
            "t": 0,
            "round_cap": round_cap,
            "initial_divergence": initial_divergence,
            "pending_witness": None,
            "witness": None,
            "claimed_gap": None,
            "outcome": None,
        }

        try:
            update["guess"] = state["alice"].open(n, config.eps)
        except Exception as e:
            logger.error(f"Alice could not open the game: {str(e)}")
            logger.exception("Detailed error:")
            record = RoundRecord(
                t=1,
                alice_guess={"kind": "none"},
                verdict=Verdict.ALICE_BUDGET_EXCEEDED,
                note=f"strategy error: {e}",
            )
            update.update(
                {
                    "guess": None,
                    "rounds": [record],
                    "outcome": Outcome.BOB_WINS.value,
                    "errors": [f"Alice strategy error: {str(e)}"],
                    "current_step": "Initialization failed",
                    "next_steps": ["finalize"],
                }
            )
            return update

        logger.info(f"📏 D(nu||U) = {initial_divergence:.4f} nats, round cap {round_cap}")
        update.update({"current_step": "Initialization completed", "next_steps": ["alice"]})
        return update
