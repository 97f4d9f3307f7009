import logging

from ..models import Outcome, RoundRecord, Verdict
from ..state import GameState
from .diagnostics import exact_diagnostics

logger = logging.getLogger(__name__)


class BobNode:
    """Node where Bob proposes a distinguishing witness or concedes."""

    def __init__(self):
        """Initialize the Bob node."""
        pass

    def run(self, state: GameState) -> dict:
        """
        Ask Bob for a witness against Alice's disclosed guess.

        A concession (or a Bob strategy error) ends the game in Alice's favour.
        """
        config = state["config"]
        target = state["target"]
        alice = state["alice"]
        bob = state["bob"]
        guess = state["guess"]
        t = state["t"]

        try:
            mu = alice.pmf(guess)
            proposal = bob.propose(target, mu, config.eps, state.get("history", []))
        except Exception as e:
            logger.error(f"Bob strategy error in round {t}: {str(e)}")
            logger.exception("Detailed error:")
            record = RoundRecord(
                t=t,
                alice_guess=alice.describe(guess),
                verdict=Verdict.BOB_CONCEDED,
                note=f"strategy error: {e}",
            )
            return {
                "witness": None,
                "rounds": [record],
                "outcome": Outcome.ALICE_WINS.value,
                "errors": [f"Bob strategy error: {str(e)}"],
                "current_step": "Bob failed",
                "next_steps": ["finalize"],
            }

        if proposal is None:
            logger.info(f"🏳️ Bob concedes in round {t}")
            diagnostics = exact_diagnostics(target, mu) if config.track_exact else {}
            record = RoundRecord(
                t=t,
                alice_guess=alice.describe(guess),
                verdict=Verdict.BOB_CONCEDED,
                **diagnostics,
            )
            return {
                "witness": None,
                "claimed_gap": None,
                "rounds": [record],
                "outcome": Outcome.ALICE_WINS.value,
                "current_step": f"Bob conceded round {t}",
                "next_steps": ["finalize"],
            }

        logger.debug(f"🗡️ Bob proposes {type(proposal.witness).__name__} with gap {proposal.claimed_gap:.4f}")
        return {
            "witness": proposal.witness,
            "claimed_gap": proposal.claimed_gap,
            "current_step": f"Bob proposed a witness in round {t}",
            "next_steps": ["referee"],
        }
