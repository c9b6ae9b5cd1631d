"""JSON wire formats. Qubit indices are 1-based on the wire."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .compiler import Schedule
from .errors import DAQCError, ParseError
from .hamiltonian import AXIS_ORDER, CouplingKey, ModelKind, TwoBodyHamiltonian, coupling_index
from .polytope import FacetSet


def hamiltonian_to_dict(h: TwoBodyHamiltonian) -> dict:
    return {
        "n": h.n,
        "model": h.model.value,
        "couplings": [
            {"i": k.i, "j": k.j, "mu": k.mu, "nu": k.nu, "value": h.couplings[k]}
            for k in coupling_index(h.n, h.model)
            if k in h.couplings
        ],
    }


def hamiltonian_from_dict(data: dict) -> TwoBodyHamiltonian:
    try:
        n = int(data["n"])
        model = ModelKind.parse(data["model"])
        couplings = {}
        for c in data.get("couplings", []):
            default = "z" if model is ModelKind.ZZ else None
            mu, nu = c.get("mu", default), c.get("nu", default)
            if mu is None or nu is None:
                raise ParseError(f"coupling {c} needs mu and nu in the general model")
            key = CouplingKey(int(c["i"]), int(c["j"]), str(mu).lower(), str(nu).lower())
            if key in couplings:
                raise ParseError(f"duplicate coupling {tuple(key)}")
            couplings[key] = float(c["value"])
        return TwoBodyHamiltonian(n, model, couplings)
    except DAQCError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed Hamiltonian: {exc}") from exc


def schedule_to_dict(s: Schedule) -> dict:
    out = {
        "n": s.n,
        "model": s.model.value,
        "T": s.T,
        "total_time": s.total_time,
        "axis_order": AXIS_ORDER,
        "blocks": [{"layer": layer, "time": t} for layer, t in s.blocks],
    }
    if s.source is not None:
        out["source"] = hamiltonian_to_dict(s.source)
    if s.problem is not None:
        out["problem"] = hamiltonian_to_dict(s.problem)
    return out


def schedule_from_dict(data: dict) -> Schedule:
    try:
        return Schedule(
            int(data["n"]),
            ModelKind.parse(data["model"]),
            float(data["T"]),
            tuple((str(b["layer"]), float(b["time"])) for b in data["blocks"]),
            hamiltonian_from_dict(data["source"]) if "source" in data else None,
            hamiltonian_from_dict(data["problem"]) if "problem" in data else None,
        )
    except DAQCError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed schedule: {exc}") from exc


def facets_to_list(f: FacetSet) -> list[dict]:
    return [
        {"normal": [v.item() for v in a], "offset": c.item(), "incidence": list(inc)}
        for a, c, inc in zip(f.normals, f.offsets, f.incidence)
    ]


def facets_from_list(data: list[dict]) -> FacetSet:
    try:
        normals = np.array([f["normal"] for f in data])
        offsets = np.array([f["offset"] for f in data])
        incidence = tuple(tuple(int(i) for i in f["incidence"]) for f in data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed facet list: {exc}") from exc
    if normals.ndim != 2:
        raise ParseError("facet normals must share one dimension")
    return FacetSet(normals.shape[1], normals, offsets, incidence)


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def load_hamiltonian(path) -> TwoBodyHamiltonian:
    return hamiltonian_from_dict(read_json(path))


def load_schedule(path) -> Schedule:
    return schedule_from_dict(read_json(path))
