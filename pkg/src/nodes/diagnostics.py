from typing import Any, Dict, Optional

from ..engines import DensePmf, Witness, relative_entropy, tv_distance


def exact_diagnostics(target: DensePmf, mu: DensePmf, witness: Optional[Witness] = None) -> Dict[str, Any]:
    """D(nu || mu), TV(nu, mu) and the exact gap of ``witness``: desk-scale luxuries the referee never sees."""
    diagnostics = {
        "exact_divergence": relative_entropy(target, mu),
        "exact_tv": tv_distance(target, mu),
    }
    if witness is not None:
        diagnostics["exact_gap"] = witness.gap(mu, target)
    return diagnostics
