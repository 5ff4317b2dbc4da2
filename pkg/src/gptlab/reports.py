"""System descriptors and analysis reports as canonical JSON.

All scalars are serialized as strings: rationals as "p/q", floats with 17
significant digits (lossless for double precision).  Keys are sorted, so
re-serializing a loaded document is byte-identical.
"""

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import scalars, systems
from .errors import InvalidParameter

TOOL_VERSION = "0.1.0"

CATALOG_BUILDERS = {
    "classical": lambda p: systems.build_classical(int(p["n"])),
    "cube": lambda p: systems.build_cube(int(p["d"])),
    "octoplex": lambda p: systems.build_octoplex(int(p["d"])),
    "polygon": lambda p: systems.build_polygon(int(p["n"])),
    "squashed-gtrit": lambda p: systems.build_squashed_gtrit(),
}


def encode_scalar(x, mode):
    return scalars.format_scalar(x, mode)


def encode_vector(v, mode):
    return [encode_scalar(x, mode) for x in v]


def decode_vector(entries, mode):
    return scalars.as_vector([scalars.parse_scalar(e, mode)
                              for e in entries], mode)


def canonical_dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def content_hash(doc):
    return hashlib.sha256(canonical_dumps(doc).encode()).hexdigest()


# ---------------------------------------------------------------------------
# system descriptors

def descriptor_from_system(s):
    d = {"name": s.name, "scalar_mode": s.scalar_mode}
    if s.kind is not None:
        d["kind"] = s.kind
        d["params"] = {k: int(v) for k, v in (s.params or {}).items()}
    else:
        d["dim"] = s.dim
        d["unit"] = encode_vector(s.unit, s.scalar_mode)
        d["ray_extremes"] = [encode_vector(e, s.scalar_mode)
                             for e in s.ray_extremes]
        if s.ray_labels:
            d["ray_labels"] = list(s.ray_labels)
    return d


def system_from_descriptor(d):
    if not isinstance(d, dict) or "scalar_mode" not in d:
        raise InvalidParameter("descriptor must be an object with a "
                               "scalar_mode field")
    mode = d["scalar_mode"]
    if mode not in (scalars.EXACT, scalars.FLOAT):
        raise InvalidParameter("unknown scalar mode %r" % mode)
    if "kind" in d:
        kind = d["kind"]
        if kind not in CATALOG_BUILDERS:
            raise InvalidParameter("unknown catalog kind %r" % kind)
        return CATALOG_BUILDERS[kind](d.get("params", {}))
    for key in ("dim", "unit", "ray_extremes"):
        if key not in d:
            raise InvalidParameter("explicit descriptor missing %r" % key)
    unit = [scalars.parse_scalar(x, mode) for x in d["unit"]]
    rays = [[scalars.parse_scalar(x, mode) for x in e]
            for e in d["ray_extremes"]]
    return systems.system_from_effect_rays(
        d.get("name", "custom"), rays, unit, mode,
        labels=d.get("ray_labels"))


def save_descriptor(d, path):
    with open(path, "w") as f:
        f.write(canonical_dumps(d))


def load_descriptor(path):
    with open(path) as f:
        return json.load(f)


def composite_descriptor(parts):
    """Descriptor for a composite: the ordered list of local descriptors."""
    return {"composite": parts}


def is_composite_descriptor(d):
    return isinstance(d, dict) and "composite" in d


def local_descriptors(d):
    if is_composite_descriptor(d):
        return d["composite"]
    return [d]


# ---------------------------------------------------------------------------
# analysis reports

@dataclass
class AnalysisReport:
    analysis: str
    tool_version: str = TOOL_VERSION
    input_hash: str = ""
    scalar_mode: str = scalars.FLOAT
    checks: dict = field(default_factory=dict)     # name -> bool
    counts: dict = field(default_factory=dict)     # name -> int
    witnesses: dict = field(default_factory=dict)  # name -> JSON value
    timings: dict = field(default_factory=dict)    # name -> seconds string
    partial: bool = False

    @property
    def passed(self):
        return all(self.checks.values())

    def add_timing(self, name, seconds):
        self.timings[name] = scalars.format_scalar(float(seconds),
                                                   scalars.FLOAT)

    def witness_vector(self, name, v):
        self.witnesses[name] = encode_vector(np.asarray(v).ravel(),
                                             self.scalar_mode)

    def to_dict(self):
        return {"analysis": self.analysis,
                "tool_version": self.tool_version,
                "input_hash": self.input_hash,
                "scalar_mode": self.scalar_mode,
                "checks": self.checks,
                "counts": self.counts,
                "witnesses": self.witnesses,
                "timings": self.timings,
                "partial": self.partial}

    @classmethod
    def from_dict(cls, d):
        return cls(analysis=d["analysis"], tool_version=d["tool_version"],
                   input_hash=d["input_hash"],
                   scalar_mode=d["scalar_mode"], checks=d["checks"],
                   counts=d["counts"], witnesses=d["witnesses"],
                   timings=d["timings"], partial=d.get("partial", False))


def save_report(report, path):
    with open(path, "w") as f:
        f.write(canonical_dumps(report.to_dict()))


def load_report(path):
    with open(path) as f:
        return AnalysisReport.from_dict(json.load(f))
