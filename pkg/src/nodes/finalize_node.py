import logging
import os

from ..engines import DensePmf, relative_entropy, tv_distance
from ..engines.mirror import iteration_cap
from ..models import GameTranscript, Outcome, Verdict
from ..state import GameState

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.12g"


class FinalizeNode:
    """Node for assembling the game transcript and saving it when an output directory is set."""

    def __init__(self):
        """Initialize the finalize node."""
        pass

    def run(self, state: GameState) -> dict:
        """
        Build the transcript with exact final diagnostics and write it out.

        The final TV is measured against the last guess Alice disclosed.
        """
        logger.info("🏁 Finalizing verification game")

        try:
            transcript = self._build_transcript(state)
            print(
                f"🏁 {transcript.outcome.value} after {len(transcript.rounds)} rounds "
                f"({transcript.updates} updates), final TV {transcript.final_tv:.4f}"
            )
            if state.get("output_dir"):
                self._save(transcript, state["output_dir"])
            return {
                "transcript": transcript,
                "current_step": "Finalization completed",
                "next_steps": [],
            }

        except Exception as e:
            logger.error(f"Finalization error: {str(e)}")
            logger.exception("Detailed error:")
            return {
                "errors": [f"Finalization error: {str(e)}"],
                "current_step": "Finalization failed",
                "next_steps": [],
            }

    def _build_transcript(self, state: GameState) -> GameTranscript:
        config = state["config"]
        target = state["target"]
        alice = state["alice"]
        guess = state.get("guess")
        mu = alice.pmf(guess) if guess is not None else DensePmf.uniform(target.width)
        rounds = state.get("rounds", [])

        return GameTranscript(
            config=config,
            seed=state["seed"],
            width=target.width,
            target_label=state.get("target_label", "target"),
            alice=alice.name,
            bob=state["bob"].name,
            rounds=rounds,
            outcome=Outcome(state.get("outcome") or Outcome.ROUND_CAP_REACHED.value),
            updates=sum(1 for r in rounds if r.verdict is Verdict.BOB_REFUTED_ALICE),
            round_cap=state["round_cap"],
            round_bound=iteration_cap(state["initial_divergence"], config.eps),
            initial_divergence=state["initial_divergence"],
            final_tv=tv_distance(target, mu),
            final_divergence=relative_entropy(target, mu),
            errors=list(state.get("errors", [])),
        )

    def _save(self, transcript: GameTranscript, output_dir: str) -> None:
        """Write ``transcript.json`` and the per-round ``rounds.csv``."""
        if not os.path.exists(output_dir):
            os.makedirs(output_dir)
            logger.info(f"Created results directory: {output_dir}")

        json_path = os.path.join(output_dir, "transcript.json")
        with open(json_path, "w") as f:
            f.write(transcript.model_dump_json(indent=2))

        csv_path = os.path.join(output_dir, "rounds.csv")
        transcript.metrics_frame().to_csv(csv_path, index=False, float_format=CSV_FLOAT_FORMAT)
        logger.info(f"💾 Transcript saved to {json_path} and {csv_path}")
