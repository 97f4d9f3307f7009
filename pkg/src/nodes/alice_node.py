import logging

from ..models import Outcome, RoundRecord, Verdict
from ..state import GameState

logger = logging.getLogger(__name__)


class AliceNode:
    """Node where Alice absorbs the last accepted witness and discloses her next guess."""

    def __init__(self):
        """Initialize the Alice node."""
        pass

    def run(self, state: GameState) -> dict:
        t = state["t"] + 1
        alice = state["alice"]
        guess = state["guess"]
        pending = state.get("pending_witness")

        try:
            if pending is not None:
                guess = alice.update(guess, pending)
            logger.debug(f"🧑‍🎓 Alice discloses round {t}: {alice.describe(guess)}")
            return {
                "t": t,
                "guess": guess,
                "pending_witness": None,
                "current_step": f"Alice disclosed round {t}",
                "next_steps": ["bob"],
            }

        except Exception as e:
            logger.error(f"Alice strategy error in round {t}: {str(e)}")
            logger.exception("Detailed error:")
            record = RoundRecord(
                t=t,
                alice_guess={"kind": "none"},
                verdict=Verdict.ALICE_BUDGET_EXCEEDED,
                note=f"strategy error: {e}",
            )
            return {
                "t": t,
                "rounds": [record],
                "outcome": Outcome.BOB_WINS.value,
                "errors": [f"Alice strategy error: {str(e)}"],
                "current_step": "Alice failed",
                "next_steps": ["finalize"],
            }
