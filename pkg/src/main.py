from typing import Any, Optional, Union
import logging
import os

from langgraph.graph import START, StateGraph, END
from dotenv import load_dotenv

from .engines import Circuit, DensePmf, output_distribution
from .engines.mirror import iteration_cap, worst_case_divergence
from .errors import ArenaError
from .models import GameConfig, GameTranscript
from .state import GameState
from .strategies import AliceStrategy, BobStrategy
from .nodes import (
    InitializerNode,
    AliceNode,
    BobNode,
    RefereeNode,
    FinalizeNode,
)

# Set up logging
logging.basicConfig(
    level=os.getenv("ARENA_LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

SUPERSTEPS_PER_ROUND = 3


class VerificationGameGraph:
    def __init__(self):
        """Initialize the verification game graph.

        The graph is strategy-agnostic: players, target and config travel in the state.
        """
        self._init_nodes()
        self._build_workflow()
        self.compiled_app = None

    def _init_nodes(self):
        """Initialize all workflow nodes"""
        self.initializer = InitializerNode()
        self.alice_node = AliceNode()
        self.bob_node = BobNode()
        self.referee_node = RefereeNode()
        self.finalizer = FinalizeNode()

    def _build_workflow(self):
        """Configure the state graph workflow"""
        self.workflow = StateGraph(GameState)

        self.workflow.add_node("initialize", self.initializer.run)
        self.workflow.add_node("alice", self.alice_node.run)
        self.workflow.add_node("bob", self.bob_node.run)
        self.workflow.add_node("referee", self.referee_node.run)
        self.workflow.add_node("finalize", self.finalizer.run)

        self.workflow.add_edge(START, "initialize")
        self.workflow.add_conditional_edges(
            "initialize",
            lambda state: self._decided(state),
            {True: "finalize", False: "alice"},
        )
        self.workflow.add_conditional_edges(
            "alice",
            lambda state: self._decided(state),
            {True: "finalize", False: "bob"},
        )

        # Bob either concedes (game over) or hands a witness to the referee
        self.workflow.add_conditional_edges(
            "bob",
            lambda state: self._decided(state),
            {True: "finalize", False: "referee"},
        )

        # An accepted refutation sends the game back to Alice for another round
        self.workflow.add_conditional_edges(
            "referee",
            lambda state: self._decided(state),
            {True: "finalize", False: "alice"},
        )
        self.workflow.add_edge("finalize", END)

    def _decided(self, state: GameState) -> bool:
        return state.get("outcome") is not None

    def compile(self):
        """Compile the workflow and cache the compiled app.

        Returns:
            The compiled workflow app
        """
        if self.compiled_app is None:
            logger.info("Compiling verification game workflow")
            self.compiled_app = self.workflow.compile()
        return self.compiled_app

    def create_initial_state(
        self,
        config: GameConfig,
        alice: AliceStrategy,
        bob: BobStrategy,
        target: DensePmf,
        seed: int,
        target_label: str = "target",
        output_dir: Optional[str] = None,
    ) -> GameState:
        return GameState(
            config=config,
            target=target,
            alice=alice,
            bob=bob,
            seed=int(seed),
            target_label=target_label,
            output_dir=output_dir,
            t=0,
            history=[],
            rounds=[],
            outcome=None,
            transcript=None,
            current_step="starting game",
            next_steps=["initialize"],
            errors=[],
        )

    def run(self, state: GameState) -> GameState:
        """Play one game to completion.

        Returns:
            The final state, with the assembled transcript under ``transcript``
        """
        app = self.compile()
        round_cap = state["config"].round_cap
        if round_cap is None:
            # same worst-case cap the initializer applies
            n = state["target"].width
            round_cap = max(1, iteration_cap(worst_case_divergence(n), state["config"].eps))
        limit = SUPERSTEPS_PER_ROUND * (round_cap + 1) + 10

        logger.info(f"Starting verification game (seed {state['seed']})")
        result = app.invoke(state, config={"recursion_limit": limit})
        logger.info("Verification game completed")

        result["current_step"] = "workflow completed"
        result["next_steps"] = []
        return result

    def visualize(self, output_path="workflow_diagram.mmd"):
        """Save the workflow as Mermaid text.

        Returns:
            bool: True if successful, False otherwise
        """
        try:
            app = self.compile()
            with open(output_path, "w") as f:
                f.write(app.get_graph().draw_mermaid())
            logger.info(f"Workflow diagram saved as {output_path}")
            return True
        except Exception as e:
            logger.warning(f"Could not save workflow diagram: {e}")
            return False


_default_graph: Optional[VerificationGameGraph] = None


def run_game(
    config: GameConfig,
    alice: AliceStrategy,
    bob: BobStrategy,
    target: Union[DensePmf, Circuit],
    seed: int,
    target_label: str = "target",
    output_dir: Optional[str] = None,
    graph: Optional[VerificationGameGraph] = None,
) -> GameTranscript:
    """Play Alice against Bob on ``target`` (a pmf, or a circuit simulated to its output pmf)."""
    global _default_graph
    if graph is None:
        if _default_graph is None:
            _default_graph = VerificationGameGraph()
        graph = _default_graph
    if isinstance(target, Circuit):
        target = output_distribution(target)
    state = graph.create_initial_state(config, alice, bob, target, seed, target_label, output_dir)
    result: Any = graph.run(state)
    if result.get("transcript") is None:
        raise ArenaError(f"game finished without a transcript: {result.get('errors')}")
    return result["transcript"]
