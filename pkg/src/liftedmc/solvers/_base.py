from __future__ import annotations

from dataclasses import dataclass, field

SOLVER_KINDS = ("exact", "gaec", "gaec-ls", "gaec-kl", "hierarchical")
_ALIASES = {
    "gaec+local-search": "gaec-ls",
    "gaec_ls": "gaec-ls",
    "gaec_kl": "gaec-kl",
    "hier": "hierarchical",
}
EXACT_NODE_LIMIT = 14


class SolverError(ValueError):
    pass


def canonical_kind(kind: str) -> str:
    kind = _ALIASES.get(kind, kind)
    if kind not in SOLVER_KINDS:
        raise SolverError(f"unknown solver {kind!r}; expected one of {SOLVER_KINDS}")
    return kind


@dataclass(frozen=True)
class SolverConfig:
    """Which flat solver to run and its knobs.

    ``seed`` is carried for interface stability; every solver shipped here
    is deterministic and does not draw random numbers.
    """

    kind: str = "gaec-ls"
    exact_max_nodes: int = 12
    local_search_max_sweeps: int = 100
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if not 1 <= self.exact_max_nodes <= EXACT_NODE_LIMIT:
            raise SolverError(f"exact_max_nodes must be in [1, {EXACT_NODE_LIMIT}]")
        if self.local_search_max_sweeps < 0:
            raise SolverError("local_search_max_sweeps must be >= 0")


@dataclass(frozen=True)
class SolveResult:
    labeling: tuple[int, ...]
    energy: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def n_components(self) -> int:
        return max(self.labeling) + 1 if self.labeling else 0
