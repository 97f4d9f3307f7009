import logging

from ..engines import sample_schedule, stream, verify_claim, verify_exact
from ..errors import BudgetExceededError
from ..models import Outcome, RoundRecord, Verdict, sample_hash
from ..state import GameState
from .diagnostics import exact_diagnostics

logger = logging.getLogger(__name__)

BOB_SIDE = 0
ALICE_SIDE = 1


class RefereeNode:
    """Node where the referee samples both players and checks the claimed gaps."""

    def __init__(self):
        """Initialize the referee node."""
        pass

    def run(self, state: GameState) -> dict:
        """
        Check Bob's witness (and, with recheck_history, every earlier one) against fresh samples.

        Bob's samples come from stream (seed, t, 0) and Alice's from (seed, t, 1), so a run
        replays exactly from its seed. Any accepted witness refutes Alice's guess; if none is
        accepted Bob's claim fails and the game ends in Alice's favour.
        """
        config = state["config"]
        target = state["target"]
        alice = state["alice"]
        guess = state["guess"]
        witness = state["witness"]
        seed = state["seed"]
        t = state["t"]

        checks = [witness] + (list(state.get("history", [])) if config.recheck_history else [])
        record = {
            "t": t,
            "alice_guess": alice.describe(guess),
            "bob_witness": witness.to_json(),
            "claimed_gap": state.get("claimed_gap"),
        }
        mu = None

        if config.referee_mode == "exact":
            mu = alice.pmf(guess)
            results = [verify_exact(mu, target, f, config.eps) for f in checks]
        else:
            count = sample_schedule(t, config.eps, config.delta, config.sample_schedule_constant)
            bob_samples = target.sample(count, stream(seed, t, BOB_SIDE))
            try:
                alice_samples, trials = alice.sample(
                    guess, count, stream(seed, t, ALICE_SIDE), config.alice_trial_cap_factor
                )
            except BudgetExceededError as e:
                logger.warning(f"⛔ Alice exceeded her sampling budget in round {t}: {e}")
                return self._alice_loses(record, f"sampling budget exceeded: {e}")
            except Exception as e:
                logger.error(f"Alice sampling error in round {t}: {str(e)}")
                logger.exception("Detailed error:")
                return self._alice_loses(record, f"strategy error: {e}", error=True)

            results = [verify_claim(bob_samples, alice_samples, f, config.eps, expected=count) for f in checks]
            record.update(
                referee_samples_per_side=count,
                alice_trials=int(trials.sum()),
                bob_sample_hash=sample_hash(bob_samples),
                alice_sample_hash=sample_hash(alice_samples),
            )
            if config.embed_samples:
                record.update(bob_samples=bob_samples.tolist(), alice_samples=alice_samples.tolist())

        accepted = [r.accepted for r in results]
        record.update(empirical_gaps=[r.empirical_gap for r in results], accepted=accepted)
        if config.track_exact:
            mu = alice.pmf(guess) if mu is None else mu
            record.update(exact_diagnostics(target, mu, witness))

        if any(accepted):
            pending = checks[accepted.index(True)]
            outcome = Outcome.ROUND_CAP_REACHED.value if t >= state["round_cap"] else None
            logger.info(f"⚔️ Round {t}: Bob refuted Alice (empirical gap {results[0].empirical_gap:.4f})")
            return {
                "rounds": [RoundRecord(verdict=Verdict.BOB_REFUTED_ALICE, **record)],
                "history": [witness],
                "pending_witness": pending,
                "outcome": outcome,
                "current_step": f"Referee accepted round {t}",
                "next_steps": ["finalize"] if outcome else ["alice"],
            }

        logger.info(f"🛡️ Round {t}: referee rejected Bob's claim (empirical gap {results[0].empirical_gap:.4f})")
        return {
            "rounds": [RoundRecord(verdict=Verdict.BOB_CONCEDED, note="claim rejected by referee", **record)],
            "history": [witness],
            "outcome": Outcome.ALICE_WINS.value,
            "current_step": f"Referee rejected round {t}",
            "next_steps": ["finalize"],
        }

    def _alice_loses(self, record: dict, note: str, error: bool = False) -> dict:
        update = {
            "rounds": [RoundRecord(verdict=Verdict.ALICE_BUDGET_EXCEEDED, note=note, **record)],
            "outcome": Outcome.BOB_WINS.value,
            "current_step": "Alice could not sample",
            "next_steps": ["finalize"],
        }
        if error:
            update["errors"] = [f"Alice strategy error: {note}"]
        return update
