"""Simulated-annealing search over stacking sequences.

A candidate is a list of indices into a discrete orientation alphabet. Moves
change the orientation of one ply; acceptance is Metropolis with geometric
cooling per epoch. The chain draws all random numbers from one generator
seeded from the configuration, so a fixed seed reproduces the trace bit for
bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np

from .config import default_tol
from .errors import CaseNotApplicable, ParseError, SingularMatrix, UnknownQuantity
from .kelvin import skew_residual
from .laminate import LaminateTensors, Stack, homogenize, layer_weights, ply_stiffness
from .material import Material, builtin, material_library, parse_json_text
from .polar import from_cartesian_sym

# ---- objective terms ------------------------------------------------------------


class Candidate:
    """Lazy view of one stacking sequence: cheap A, B, D first, full analysis on demand."""

    def __init__(self, stack: Stack, A: np.ndarray, B: np.ndarray, D: np.ndarray, tol: float):
        self.stack, self.A, self.B, self.D, self.tol = stack, A, B, D, tol

    @cached_property
    def lt(self) -> LaminateTensors:
        lt = LaminateTensors.from_tensors(self.A, self.B, self.D, h=self.stack.h,
                                          ply=self.stack.plies[0].material.polar if self.stack.identical_ply else None,
                                          units=self.stack.units, tol=self.tol)
        object.__setattr__(lt, "stack", self.stack)
        return lt

    @cached_property
    def polar_A(self):
        return from_cartesian_sym(self.A, self.tol)

    @cached_property
    def polar_B(self):
        return from_cartesian_sym(self.B, self.tol)

    @cached_property
    def polar_D(self):
        return from_cartesian_sym(self.D, self.tol)

    @cached_property
    def anisotropy_scale(self) -> float:
        p = self.stack.plies[0].material.polar
        if self.stack.identical_ply and p.R0 + p.R1 > 0:
            return p.R0 + p.R1
        return abs(self.polar_A.T0) + abs(self.polar_A.T1)


# Residual singularities (e.g. A - 3BD^-1B not invertible) are penalized with this value.
SINGULAR_PENALTY = 1.0


def _isotropy(which: str):
    def term(c: Candidate, params: dict) -> float:
        p = getattr(c, f"polar_{which}")
        return (p.R0 + p.R1) / c.anisotropy_scale
    return term


def _frob(m) -> float:
    return float(np.linalg.norm(m))


def _a_equals_d(c: Candidate, params: dict) -> float:
    return _frob(c.A - c.D) / _frob(c.A)


def _b_zero(c: Candidate, params: dict) -> float:
    return _frob(c.B) / _frob(c.A)


def _coupled(c: Candidate, params: dict) -> float:
    """Hinge that vanishes once ||B|| / ||A|| reaches ``min`` (default 1e-3)."""
    return max(0.0, float(params.get("min", 1e-3)) - _frob(c.B) / _frob(c.A))


def _calb_symmetric(c: Candidate, params: dict) -> float:
    try:
        return skew_residual(c.lt.calB)
    except SingularMatrix:
        return SINGULAR_PENALTY


def _r0b_zero(c: Candidate, params: dict) -> float:
    return c.polar_B.R0 / c.anisotropy_scale


def _r1b_zero(c: Candidate, params: dict) -> float:
    return c.polar_B.R1 / c.anisotropy_scale


def _special_case(c: Candidate, params: dict) -> float:
    from .coupling import special_case_bsym

    try:
        return special_case_bsym(c.lt, params["case"], c.tol).max_normalized
    except (CaseNotApplicable, SingularMatrix):
        return SINGULAR_PENALTY
    except KeyError:
        raise UnknownQuantity("special_case term needs params.case") from None


def _rari(c: Candidate, params: dict) -> float:
    from .coupling import rari_constancy

    try:
        return abs(rari_constancy(c.lt, c.tol).t0_minus_t1)
    except SingularMatrix:
        return SINGULAR_PENALTY


TERMS: dict[str, Callable[[Candidate, dict], float]] = {
    "A_isotropy": _isotropy("A"),
    "D_isotropy": _isotropy("D"),
    "B_isotropy": _isotropy("B"),
    "A_equals_D": _a_equals_d,
    "B_zero": _b_zero,
    "coupled": _coupled,
    "calB_symmetric": _calb_symmetric,
    "R0B_zero": _r0b_zero,
    "R1B_zero": _r1b_zero,
    "special_case": _special_case,
    "rari_calB": _rari,
}


@dataclass(frozen=True)
class Term:
    name: str
    weight: float = 1.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in TERMS:
            raise UnknownQuantity(f"unknown objective term {self.name!r}; known: {sorted(TERMS)}")
        if not self.weight >= 0:
            raise ValueError("objective weights must be non-negative")


@dataclass(frozen=True)
class Objective:
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def of(cls, *names: str) -> "Objective":
        return cls(tuple(Term(n) for n in names))

    def residuals(self, c: Candidate) -> dict[str, float]:
        out = {}
        for t in self.terms:
            key = t.name if "case" not in t.params else f"{t.name}:{t.params['case']}"
            out[key] = float(TERMS[t.name](c, t.params))
        return out

    def value(self, c: Candidate) -> float:
        total = 0.0
        for t in self.terms:
            if t.weight:
                total += t.weight * TERMS[t.name](c, t.params)
        return float(total)


QHCL = Objective((Term("A_equals_D"), Term("coupled")))

# ---- configuration and result ------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    alphabet_deg: tuple[float, ...]
    n: int
    material: Material | str = "T300-5208"
    seed: int = 0
    budget: int = 10_000
    cooling: float = 0.97
    epoch: int | None = None  # moves per temperature step; default n * len(alphabet)
    initial_temperature: float | None = None  # default: std of 100 random objectives
    tol: float = 1e-12  # objective value counted as converged
    initial: tuple[float, ...] | None = None  # starting sequence in degrees

    def __post_init__(self):
        object.__setattr__(self, "alphabet_deg", tuple(float(a) for a in self.alphabet_deg))
        if not self.alphabet_deg:
            raise ValueError("alphabet must not be empty")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if not 0 < self.cooling < 1:
            raise ValueError("cooling factor must lie in (0, 1)")
        if self.initial is not None:
            init = tuple(float(a) for a in self.initial)
            if len(init) != self.n or any(a not in self.alphabet_deg for a in init):
                raise ValueError("initial sequence must have n plies drawn from the alphabet")
            object.__setattr__(self, "initial", init)

    @property
    def resolved_material(self) -> Material:
        return builtin(self.material) if isinstance(self.material, str) else self.material


@dataclass(frozen=True)
class SearchResult:
    stack: Stack
    objective: float
    residuals: dict[str, float]
    converged: bool
    evaluations: int
    trace_current: np.ndarray  # objective of the chain state after each evaluation
    trace_best: np.ndarray  # best-so-far after each evaluation
    seed: int

    @property
    def angles_deg(self) -> list[float]:
        return [round(a, 12) for a in self.stack.angles_deg]

    def as_dict(self) -> dict:
        best = self.trace_best
        hit = int(np.argmax(best <= best[-1])) + 1 if best.size else 0
        return {
            "stack": self.angles_deg,
            "material": self.stack.plies[0].material.name,
            "objective": self.objective,
            "residuals": self.residuals,
            "converged": self.converged,
            "evaluations": self.evaluations,
            "seed": self.seed,
            "trace": {"length": int(best.size), "first": float(self.trace_current[0]) if best.size else None,
                      "best": float(best[-1]) if best.size else None, "best_found_at": hit},
        }


# ---- the annealing chain ---------------------------------------------------------------


class _Evaluator:
    def __init__(self, cfg: SearchConfig, obj: Objective, tol: float):
        self.cfg, self.obj, self.tol = cfg, obj, tol
        mat = cfg.resolved_material
        self.material = mat
        self.q = np.stack([ply_stiffness(mat, math.radians(a)) for a in cfg.alphabet_deg])
        self.w = layer_weights(cfg.n)
        self.count = 0
        self._cache: dict[tuple[int, ...], float] = {}

    def stack(self, idx) -> Stack:
        return Stack.from_angles(self.material, [self.cfg.alphabet_deg[i] for i in idx])

    def candidate(self, idx) -> Candidate:
        q = self.q[list(idx)]
        A = np.einsum("k,kij->ij", self.w.a, q)
        B = np.einsum("k,kij->ij", self.w.b, q)
        D = np.einsum("k,kij->ij", self.w.d, q)
        return Candidate(self.stack(idx), A, B, D, self.tol)

    def __call__(self, idx) -> float:
        self.count += 1
        key = tuple(int(i) for i in idx)
        if key not in self._cache:
            self._cache[key] = self.obj.value(self.candidate(key))
        return self._cache[key]


def search(cfg: SearchConfig, obj: Objective, tol: float | None = None) -> SearchResult:
    """Anneal toward a minimum of ``obj``; returns the best sequence seen.

    ``tol`` is the analysis tolerance passed to polar conversions; the
    convergence threshold on the objective is ``cfg.tol``.
    """
    tol = default_tol() if tol is None else tol
    rng = np.random.default_rng(cfg.seed)
    ev = _Evaluator(cfg, obj, tol)
    m = len(cfg.alphabet_deg)
    if cfg.initial is not None:
        state = np.array([cfg.alphabet_deg.index(a) for a in cfg.initial])
    else:
        state = rng.integers(0, m, cfg.n)
    cur = ev(state)
    best, best_state = cur, state.copy()
    trace_cur, trace_best = [cur], [best]

    def record():
        trace_cur.append(cur)
        trace_best.append(best)

    temperature = cfg.initial_temperature
    if temperature is None and cur > cfg.tol:
        samples = []
        for _ in range(min(100, cfg.budget - ev.count)):
            s = rng.integers(0, m, cfg.n)
            v = ev(s)
            samples.append(v)
            if v < best:
                best, best_state = v, s.copy()
            record()
        temperature = float(np.std(samples)) if len(samples) > 1 else 0.0
    temperature = temperature or 1e-3 * max(cur, 1e-300)
    t_start = temperature
    epoch = cfg.epoch or cfg.n * m
    moves = 0
    while best > cfg.tol and ev.count < cfg.budget and m > 1:
        i = int(rng.integers(cfg.n))
        new = int(rng.integers(m - 1))
        if new >= state[i]:
            new += 1
        trial = state.copy()
        trial[i] = new
        v = ev(trial)
        delta = v - cur
        if delta <= 0 or rng.random() < math.exp(-delta / temperature):
            state, cur = trial, v
            if v < best:
                best, best_state = v, trial.copy()
        record()
        moves += 1
        if moves % epoch == 0:
            temperature *= cfg.cooling
            if temperature < 1e-9 * t_start:
                temperature = t_start  # reheat
                state, cur = best_state.copy(), best
    stack = ev.stack(best_state)
    # re-evaluate through the independent homogenization path
    lt = homogenize(stack, tol)
    cand = Candidate(stack, np.asarray(lt.A), np.asarray(lt.B), np.asarray(lt.D), tol)
    final = obj.value(cand)
    return SearchResult(stack, final, obj.residuals(cand), final <= cfg.tol, ev.count,
                        np.array(trace_cur), np.array(trace_best), cfg.seed)


# ---- search spec files --------------------------------------------------------------------


def load_search_spec(path) -> tuple[SearchConfig, Objective]:
    path = Path(path)
    doc = parse_json_text(path.read_text(), str(path))
    return search_spec_from_dict(doc, str(path))


def search_spec_from_dict(doc, where: str = "search") -> tuple[SearchConfig, Objective]:
    if not isinstance(doc, dict):
        raise ParseError("search spec must be a JSON object", where)
    allowed = {"alphabet_deg", "n", "material", "materials_file", "seed", "budget", "cooling", "epoch",
               "initial_temperature", "tol", "initial", "objective"}
    for key in doc:
        if key not in allowed:
            raise ParseError(f"unknown field {key!r}", f"{where}.{key}")
    for key in ("alphabet_deg", "n", "objective"):
        if key not in doc:
            raise ParseError("missing required field", f"{where}.{key}")
    mat = doc.get("material", "T300-5208")
    if isinstance(mat, str):
        lib = material_library(doc.get("materials_file"))
        if mat not in lib:
            raise ParseError(f"unknown material {mat!r}", f"{where}.material")
        mat = lib[mat]
    else:
        from .material import material_from_dict

        mat = material_from_dict(mat, f"{where}.material")
    terms = []
    if not isinstance(doc["objective"], list):
        raise ParseError("objective must be a list", f"{where}.objective")
    for i, t in enumerate(doc["objective"]):
        loc = f"{where}.objective[{i}]"
        if not isinstance(t, dict) or "name" not in t:
            raise ParseError("objective term needs a name", loc)
        try:
            terms.append(Term(t["name"], float(t.get("weight", 1.0)), dict(t.get("params", {}))))
        except (UnknownQuantity, ValueError, TypeError) as e:
            raise ParseError(str(e), loc) from None
    try:
        cfg = SearchConfig(
            tuple(doc["alphabet_deg"]), int(doc["n"]), mat, int(doc.get("seed", 0)), int(doc.get("budget", 10_000)),
            float(doc.get("cooling", 0.97)), doc.get("epoch"), doc.get("initial_temperature"),
            float(doc.get("tol", 1e-12)), tuple(doc["initial"]) if doc.get("initial") else None,
        )
    except (ValueError, TypeError) as e:
        raise ParseError(str(e), where) from None
    return cfg, Objective(tuple(terms))


# ---- the five 18-ply QHCL sequences --------------------------------------------------------

KNOWN_QHCL = (
    "aababgbaaagbggbgbg",
    "aabagbbaaabggggbbg",
    "aabagbgaaabbgggbbg",
    "abggbbgabbagagaagb",
    "abggbgbgaagbaabbag",
)
LETTERS = {"a": 0.0, "b": 60.0, "g": -60.0}


def sequence_angles(letters: str, mapping: dict[str, float] | None = None) -> list[float]:
    mapping = LETTERS if mapping is None else mapping
    return [mapping[c] for c in letters]


@dataclass(frozen=True)
class KnownSequenceReport:
    sequences: tuple[str, ...]
    flags: tuple[dict, ...]  # per sequence
    stiffness_spread: float  # max relative spread of A and D over the sequences
    compliance_spread: float  # same for calA and calD
    min_B_distance: float  # smallest ||B_i - B_j|| / ||A|| over pairs
    tol: float = 1e-10

    @property
    def stiffness_shared(self) -> bool:
        return self.stiffness_spread < self.tol

    @property
    def compliance_shared(self) -> bool:
        return self.compliance_spread < self.tol

    @property
    def ok(self) -> bool:
        """Every per-sequence flag holds, A, D, calA, calD are shared and the B differ."""
        return (all(all(f.values()) for f in self.flags) and self.stiffness_shared and self.compliance_shared
                and self.min_B_distance > self.tol)

    def as_dict(self) -> dict:
        return {"sequences": list(self.sequences), "flags": list(self.flags),
                "stiffness_spread": self.stiffness_spread, "compliance_spread": self.compliance_spread,
                "min_B_distance": self.min_B_distance, "ok": self.ok}


def _spread(lts, names) -> float:
    out = 0.0
    for name in names:
        ref = np.asarray(getattr(lts[0], name))
        for lt in lts[1:]:
            out = max(out, _frob(np.asarray(getattr(lt, name)) - ref) / _frob(ref))
    return out


def verify_known_sequences(material: Material | str = "T300-5208", rotation_deg: float = 0.0,
                           tol: float = 1e-10) -> KnownSequenceReport:
    """Check the five 18-ply quasi-homogeneous coupled sequences.

    Note that calA and calD depend on B, so sharing A and D does not make
    them shared; ``compliance_spread`` reports how far apart they are.
    """
    mat = builtin(material) if isinstance(material, str) else material
    lts = []
    flags = []
    for seq in KNOWN_QHCL:
        stack = Stack.from_angles(mat, [a + rotation_deg for a in sequence_angles(seq)])
        lt = homogenize(stack, tol)
        lts.append(lt)
        A, D = np.asarray(lt.A), np.asarray(lt.D)
        scale = _frob(A)
        pA = lt.polar_A
        flags.append({
            "A_equals_D": _frob(A - D) < tol * scale,
            "A_isotropic": pA.R0 + pA.R1 < tol * scale,
            "coupled": _frob(lt.B) > tol * scale,
            "qhcl": lt.qhcl,
            "calB_symmetric": skew_residual(lt.calB) < tol,
            "calA_equals_calD": _frob(np.asarray(lt.calA) - np.asarray(lt.calD)) < tol * _frob(lt.calA),
        })
    dist = min(_frob(np.asarray(lts[i].B) - np.asarray(lts[j].B)) / _frob(lts[i].A)
               for i in range(len(lts)) for j in range(i + 1, len(lts)))
    return KnownSequenceReport(KNOWN_QHCL, tuple(flags), _spread(lts, ("A", "D")), _spread(lts, ("calA", "calD")),
                               dist, tol)
