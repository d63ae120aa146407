"""Dynamic approximate SINR queries over planar transmitters."""
from .classes import BoundedRatioEngine, FewPowersEngine
from .errors import SinrError
from .model import ApproxQueryResult, Classification, SinrParams, Transmitter, classify
from .nonuniform import NonUniformEngine
from .sic import SicOutcome, SicStatus, sic_enumerate, sic_resolve
from .uniform import UniformEngine

__all__ = [
    "ApproxQueryResult", "BoundedRatioEngine", "Classification", "FewPowersEngine",
    "NonUniformEngine", "SicOutcome", "SicStatus", "SinrError", "SinrParams", "Transmitter",
    "UniformEngine", "classify", "sic_enumerate", "sic_resolve",
]
