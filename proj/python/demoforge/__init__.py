"""Interactive molecular dynamics and imitation learning from demonstrations."""

from ._demoforge import (
    Error,
    Simulation,
    atom_trajectory,
    build_system,
    compute_forces,
    evaluate,
    export_csv,
    irl_benchmark,
    record_expert_demos,
    recording_info,
    sign_test,
    train_bc,
    woc_synthetic,
)

__all__ = [
    "Error",
    "Simulation",
    "atom_trajectory",
    "build_system",
    "compute_forces",
    "evaluate",
    "export_csv",
    "irl_benchmark",
    "record_expert_demos",
    "recording_info",
    "sign_test",
    "train_bc",
    "woc_synthetic",
]
