"""Loading inputs and emitting JSON / CSV / PNG artifacts.

Every number goes out as an exact record (rational or surd) together with
a decimal string computed from that record, so the decimal never carries
more authority than the exact value.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .classical import QuadraticSurd, SurdSum
from .errors import SpectraError
from .intervals import Interval, decimal_string
from .potentials import GaussPotential, Potential, PerturbationSpec, perturbation_from_json, potential_from_json
from .prooflab import FiniteSequence, ModelParams
from .symbolic import BiSequence, PeriodicSequence, SubshiftOfFiniteType, preset


class ConfigError(SpectraError, ValueError):
    """Unreadable or inconsistent input file or argument."""


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def fraction_record(x: Fraction, digits: int = 12) -> dict:
    return {"num": x.numerator, "den": x.denominator, "decimal": decimal_string(x, digits, "floor")}


def to_jsonable(obj, digits: int = 12):
    """Recursively convert library values into plain JSON data."""
    rec = lambda v: to_jsonable(v, digits)  # noqa: E731
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # shortest round-trip decimal, the same reading json_number applies on input
        return fraction_record(Fraction(repr(float(obj))), digits)
    if isinstance(obj, Fraction):
        return fraction_record(obj, digits)
    if isinstance(obj, Interval):
        return obj.to_json(digits)
    if isinstance(obj, QuadraticSurd):
        return {**obj.to_json(), "decimal": obj.decimal(digits)}
    if isinstance(obj, SurdSum):
        return {**obj.to_json(), "decimal": obj.decimal(digits)}
    if isinstance(obj, PeriodicSequence):
        return {"cycle": str(obj), "word": [rec(s) for s in obj.word]}
    if isinstance(obj, BiSequence):
        return {"left": list(obj.left), "core": list(obj.core), "right": list(obj.right), "start": obj.start}
    if isinstance(obj, FiniteSequence):
        return {"finite": list(obj.symbols), "origin": obj.origin}
    if isinstance(obj, (SubshiftOfFiniteType, Potential, PerturbationSpec, ModelParams)):
        return obj.to_json()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: rec(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, np.ndarray):
        return [rec(v) for v in obj.tolist()]
    if isinstance(obj, Mapping):
        return {str(k): rec(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [rec(v) for v in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, digits: int = 12) -> str:
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(to_jsonable(obj, digits), sort_keys=True, indent=2, ensure_ascii=True)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _read_json(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def load_sft(source: str) -> SubshiftOfFiniteType:
    """A preset name ("full2", "goldenmean", "fullN:k") or a JSON file."""
    try:
        return preset(source)
    except ValueError:
        pass
    doc = _read_json(source)
    try:
        return SubshiftOfFiniteType.from_json(doc.get("sft", doc))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: bad SFT document ({exc})") from exc


def load_potential(source: str) -> Potential:
    """"gauss:k" or a JSON file with a gauss or window document."""
    if source.startswith("gauss:"):
        try:
            return GaussPotential(int(source.split(":", 1)[1]))
        except ValueError as exc:
            raise ConfigError(f"bad potential {source!r} ({exc})") from exc
    doc = _read_json(source)
    try:
        return potential_from_json(doc.get("potential", doc))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: bad potential document ({exc})") from exc


def load_perturbation(path: str) -> PerturbationSpec:
    doc = _read_json(path)
    try:
        return perturbation_from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad perturbation document ({exc})") from exc


def load_params(path: str) -> ModelParams:
    doc = _read_json(path)
    try:
        return ModelParams.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad parameter document ({exc})") from exc


def sequence_from_json(doc: Mapping):
    """Build a sequence from one of three layouts.

    {"center": a0, "future": {"preperiod": [a1, a2, ...], "period": [...]},
     "past": {"preperiod": [a-1, a-2, ...], "period": [...]}}
    lists both one-sided tails outward from index 0;
    {"periodic": [...]} is a periodic orbit with the word starting at 0;
    {"finite": [...], "origin": i} is a finite window with finite[i] at 0.
    """
    if "periodic" in doc:
        return BiSequence.periodic(doc["periodic"])
    if "finite" in doc:
        return FiniteSequence(tuple(doc["finite"]), int(doc.get("origin", 0)))
    fut, past = doc["future"], doc["past"]
    if not fut.get("period") or not past.get("period"):
        raise ValueError("both tails need a nonempty period")
    left_pre = tuple(past.get("preperiod", ()))
    core = tuple(reversed(left_pre)) + (doc["center"],) + tuple(fut.get("preperiod", ()))
    return BiSequence(tuple(reversed(past["period"])), core, tuple(fut["period"]), -len(left_pre))


def load_sequence(path: str):
    doc = _read_json(path)
    try:
        return sequence_from_json(doc.get("theta", doc))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad sequence document ({exc})") from exc


# ---------------------------------------------------------------------------
# Entropy curves
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("t", "entropy_lower", "entropy_upper", "node_count", "edge_count")


def entropy_rows(points, digits: int = 12) -> list[dict]:
    rows = []
    for p in points:
        lo = hi = ""
        if p.entropy is not None:
            lo = decimal_string(p.entropy.lo, digits, "floor")
            hi = decimal_string(p.entropy.hi, digits, "ceil")
        rows.append({"t": decimal_string(p.t, digits, "floor"), "entropy_lower": lo,
                     "entropy_upper": hi, "node_count": p.node_count, "edge_count": p.edge_count})
    return rows


def write_entropy_csv(points, path, digits: int = 12) -> None:
    """Empty sublevel sets leave both entropy columns blank."""
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(entropy_rows(points, digits))


def read_entropy_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def plot_entropy_csv(csv_path, png_path, title: Optional[str] = None) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = read_entropy_csv(csv_path)
    t = [float(r["t"]) for r in rows]
    nan = float("nan")
    lo = [float(r["entropy_lower"]) if r["entropy_lower"] else nan for r in rows]
    hi = [float(r["entropy_upper"]) if r["entropy_upper"] else nan for r in rows]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.fill_between(t, lo, hi, step="mid", alpha=0.3)
    ax.step(t, hi, where="mid", lw=1)
    ax.set_xlabel("t")
    ax.set_ylabel("h(t)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_sample(values: Sequence[float], png_path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 1.8))
    ax.eventplot([list(values)], lineoffsets=0, linelengths=1)
    ax.set_yticks([])
    ax.set_xlabel("Markov value of periodic orbits")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120, metadata={"Software": None})
    plt.close(fig)
