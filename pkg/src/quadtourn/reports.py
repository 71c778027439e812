"""JSON payloads for every result type, wrapped in a self-describing run report."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any


from quadtourn import __version__
from quadtourn.enumeration import EnumerationSummary
from quadtourn.ortho import DependencyCertificate, OrthoSearchResult
from quadtourn.quad import DominationResult, QuadReport, RotationalCriterion, StrongQuadWitness
from quadtourn.sampling import SampleEstimate


def _num(x: float):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else float(x)


def quad_payload(r: QuadReport) -> dict:
    return {
        "quadrangular": r.quadrangular,
        "out_quadrangular": r.out_quadrangular,
        "in_quadrangular": r.in_quadrangular,
        "out_witness": list(r.out_witness) if r.out_witness else None,
        "in_witness": list(r.in_witness) if r.in_witness else None,
    }


def strong_payload(w: StrongQuadWitness | None) -> dict:
    if w is None:
        return {"strongly_quadrangular": True, "witness": None}
    return {
        "strongly_quadrangular": False,
        "witness": {"side": w.side, "set": w.set_S.to_list(), "union_size": w.union_size},
    }


def domination_payload(d: DominationResult) -> dict:
    return {"gamma": d.gamma, "witness": d.witness.to_list()}


def rotational_payload(c: RotationalCriterion, modulus: int, symbol) -> dict:
    return {
        "modulus": modulus,
        "symbol": sorted(symbol),
        "holds": c.holds,
        "subsets": {str(m): [list(p) for p in pairs] for m, pairs in c.subsets.items()},
    }


def summary_payload(s: EnumerationSummary) -> dict:
    return {
        "n": s.n,
        "class_count": s.class_count,
        "labeled_check": str(s.labeled_check),
        "labeled_check_ok": s.labeled_check_ok,
        "filter_name": s.filter_name,
        "filter_count": s.filter_count,
    }


def sample_payload(e: SampleEstimate) -> dict:
    return e.row()


def ortho_payload(r: OrthoSearchResult) -> dict:
    return {
        "status": r.status,
        "matrix": r.matrix.tolist() if r.matrix is not None else None,
        "orthogonality_residual": _num(r.orthogonality_residual),
        "pattern_residual": _num(r.pattern_residual),
        "min_support_entry": _num(r.min_support_entry),
        "restarts_used": r.restarts_used,
        "iterations_used": r.iterations_used,
    }


def certificate_payload(c: DependencyCertificate | None) -> dict:
    if c is None:
        return {"refuted": False, "certificate": None}
    used = c.used_facts()
    return {
        "refuted": True,
        "certificate": {
            "side": c.side,
            "contradiction": list(c.contradiction),
            "facts": [
                {"index": i, "pair": list(c.facts[i].pair), "cols": list(c.facts[i].cols),
                 "source": list(c.facts[i].source)}
                for i in used
            ],
        },
    }


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunReport:
    command: str
    inputs: dict[str, Any]
    outcome: dict[str, Any]
    version: str = __version__
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outcome": self.outcome,
            "version": self.version,
            "elapsed": self.elapsed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        d = json.loads(text)
        return cls(d["command"], d["inputs"], d["outcome"], d["version"], d["elapsed"])
