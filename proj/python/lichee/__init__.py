"""Multi-sample cancer lineage reconstruction."""

from ._lichee import InputError, evaluate, group_snvs, reconstruct, simulate, solve_min_norm

__all__ = ["InputError", "evaluate", "group_snvs", "reconstruct", "simulate", "solve_min_norm"]
