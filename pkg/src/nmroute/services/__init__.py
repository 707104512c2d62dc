"""Experiment engines built on top of the path algorithms."""
from .bench import BenchRecord, bench_scalability, run_queries
from .energy import EnergyParams, energy
from .te import FlowState, TEResult, te_greedy
from .vne import VNRequest, VNResult, make_vn_requests, vne_embed, vne_run

__all__ = [
    "BenchRecord", "bench_scalability", "run_queries",
    "EnergyParams", "energy",
    "FlowState", "TEResult", "te_greedy",
    "VNRequest", "VNResult", "make_vn_requests", "vne_embed", "vne_run",
]
