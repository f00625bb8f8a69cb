"""Verification campaigns for declared integrals of motion."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .catalog import Integral, Model
from .errors import ParameterError, SamplingError
from .fields import EPS_DOM, PhaseField, PhasePoint, bracket_from_gradients, value_and_gradient_batch
from .rng import Xoshiro256

DEFAULT_TOL = 1e-9
RANK_POINTS = 100
RANK_FRACTION = 0.95
SV_THRESHOLD = 1e-8


@dataclass(frozen=True)
class SampleSpec:
    count: int = 1000
    seed: int = 0
    box: tuple[tuple[float, float], ...] | None = None
    exclusion: float = 0.1
    max_tries: int = 1000

    def __post_init__(self):
        if self.count < 1:
            raise ParameterError("count must be positive")
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be an unsigned 64-bit integer")
        if not self.exclusion > EPS_DOM:
            raise ParameterError(f"exclusion must exceed {EPS_DOM:g}")
        if self.box is not None:
            box = tuple((float(lo), float(hi)) for lo, hi in self.box)
            if any(not lo < hi for lo, hi in box):
                raise ParameterError("every box interval needs low < high")
            object.__setattr__(self, "box", box)

    def resolved_box(self, n: int) -> tuple[tuple[float, float], ...]:
        if self.box is None:
            return default_box(n)
        if len(self.box) != 2 * n:
            raise ParameterError(f"box needs {2 * n} intervals (q then p), got {len(self.box)}")
        return self.box


def default_box(n: int, q_range: float = 2.0, p_range: float = 1.0):
    return ((-q_range, q_range),) * n + ((-p_range, p_range),) * n


def _draw(spec: SampleSpec, n: int, box, start: int, stop: int):
    lo = np.array([b[0] for b in box])
    width = np.array([b[1] - b[0] for b in box])
    pts = np.empty((stop - start, 2 * n))
    rejected = 0
    for i in range(start, stop):
        g = Xoshiro256.for_index(spec.seed, i)
        for _ in range(spec.max_tries):
            x = lo + width * np.asarray(g.uniforms(2 * n))
            if np.all(np.abs(x[:n]) >= spec.exclusion):
                pts[i - start] = x
                break
            rejected += 1
        else:
            raise SamplingError(
                f"point {i}: no admissible draw in {spec.max_tries} tries; the box leaves almost no room "
                f"outside the exclusion zone {spec.exclusion}"
            )
    return pts, rejected


def sample_points(spec: SampleSpec, n: int, jobs: int = 1) -> list[PhasePoint]:
    Q, P = sample_arrays(spec, n, jobs)
    return [PhasePoint(q, p) for q, p in zip(Q, P)]


def sample_arrays(spec: SampleSpec, n: int, jobs: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Seeded uniform points in the box with ``|q_i| >= exclusion``.

    Point ``i`` is drawn from its own stream, so the result does not depend
    on ``jobs``.
    """
    box = spec.resolved_box(n)
    chunks = _chunks(spec.count, jobs)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            parts = list(ex.map(lambda c: _draw(spec, n, box, *c), chunks))
    else:
        parts = [_draw(spec, n, box, *c) for c in chunks]
    pts = np.vstack([p for p, _ in parts])
    rejected = sum(r for _, r in parts)
    if rejected > 99 * spec.count:
        raise SamplingError(f"rejection rate {rejected / (rejected + spec.count):.3f} exceeds 99%")
    return pts[:, :n].copy(), pts[:, n:].copy()


def _chunks(count, jobs):
    jobs = max(1, int(jobs))
    edges = np.linspace(0, count, jobs + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


# residuals -----------------------------------------------------------------------

def _grads(fields: Sequence[PhaseField], Q, P, jobs: int = 1):
    def one(f):
        return value_and_gradient_batch(f, Q, P)[1]

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(one, fields))
    return [one(f) for f in fields]


def normalized_bracket(gf: np.ndarray, gg: np.ndarray) -> np.ndarray:
    """``|{f, g}| / (1 + |grad f| |grad g|)`` per point."""
    num = np.abs(bracket_from_gradients(gf, gg))
    den = 1.0 + np.linalg.norm(gf, axis=1) * np.linalg.norm(gg, axis=1)
    return num / den


@dataclass(frozen=True)
class IntegralResidual:
    label: str
    order: int
    max_residual: float

    def passed(self, tol: float) -> bool:
        return self.max_residual <= tol


def check_commutation(
    model: Model, spec: SampleSpec | None = None, tol: float = DEFAULT_TOL, jobs: int = 1
) -> list[IntegralResidual]:
    spec = spec or SampleSpec()
    Q, P = sample_arrays(spec, model.N, jobs)
    gh, *gi = _grads([model.hamiltonian] + [i.field for i in model.integrals], Q, P, jobs)
    return [
        IntegralResidual(i.label, i.order, float(normalized_bracket(gh, g).max()))
        for i, g in zip(model.integrals, gi)
    ]


def failing(residuals: Sequence[IntegralResidual], tol: float) -> list[str]:
    return [r.label for r in residuals if not r.passed(tol)]


# functional independence ---------------------------------------------------------

def _rows(grads: Sequence[np.ndarray]) -> np.ndarray:
    """Stack gradients as ``(M, rows, 2N)``; complex fields contribute real and imaginary rows."""
    rows = []
    for g in grads:
        if np.iscomplexobj(g):
            rows += [g.real, g.imag]
        else:
            rows.append(g)
    return np.stack(rows, axis=1)


def rank_from_gradients(grads: Sequence[np.ndarray], sv_threshold: float = SV_THRESHOLD) -> np.ndarray:
    """Numerical rank per point after row normalization."""
    mats = _rows(grads)
    norms = np.linalg.norm(mats, axis=2, keepdims=True)
    mats = np.divide(mats, norms, out=np.zeros_like(mats), where=norms > 0)
    sv = np.linalg.svd(mats, compute_uv=False)
    top = sv[:, :1]
    return np.sum(sv > sv_threshold * np.where(top > 0, top, np.inf), axis=1)


def independence_rank(
    fields: Sequence[PhaseField], point: PhasePoint, sv_threshold: float = SV_THRESHOLD
) -> int:
    """Rank of the stacked gradients of ``fields`` at ``point``.

    Pass the Hamiltonian among ``fields`` when it should be counted.
    """
    Q, P = point.q[None, :], point.p[None, :]
    return int(rank_from_gradients(_grads(list(fields), Q, P), sv_threshold)[0])


def rank_statistics(fields: Sequence[PhaseField], Q, P, expected: int, sv_threshold: float = SV_THRESHOLD):
    ranks = rank_from_gradients(_grads(list(fields), Q, P), sv_threshold)
    return {
        "expected": int(expected),
        "observed_min": int(ranks.min()),
        "observed_max": int(ranks.max()),
        "fraction": float(np.mean(ranks == expected)),
    }


# involution ----------------------------------------------------------------------

def involution_table(model: Model, spec: SampleSpec | None = None, jobs: int = 1) -> tuple[list[str], np.ndarray]:
    """Max normalized ``|{F_i, F_j}|`` over sampled points, ``F_0 = H``."""
    spec = spec or SampleSpec()
    Q, P = sample_arrays(spec, model.N, jobs)
    fields = [model.hamiltonian] + [i.field for i in model.integrals]
    labels = ["H"] + model.labels()
    grads = _grads(fields, Q, P, jobs)
    k = len(fields)
    table = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            table[a, b] = table[b, a] = float(normalized_bracket(grads[a], grads[b]).max())
    return labels, table


# reports -------------------------------------------------------------------------

@dataclass
class VerificationReport:
    model: str
    params: dict
    seed: int
    samples: int
    tol: float
    integrals: list[dict]
    rank: dict
    involution: list[list[float]]
    involution_labels: list[str] = field(default_factory=list)
    passed: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, default=_jsonable)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        d = dict(d)
        d["passed"] = d.pop("pass")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        lines = [f"model {self.model} {self.params} seed={self.seed} samples={self.samples} tol={self.tol:g}"]
        for item in self.integrals:
            flag = "ok  " if item["max_residual"] <= self.tol else "FAIL"
            lines.append(f"  {flag} {item['label']:>8}  order {item['order']:>2}  max residual {item['max_residual']:.3e}")
        r = self.rank
        lines.append(
            f"  rank expected {r['expected']}, observed min {r['observed_min']}, "
            f"fraction at expected {r['fraction']:.2f}"
        )
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    raise TypeError(f"not JSON serializable: {type(x)}")


def verify(model: Model, spec: SampleSpec | None = None, tol: float = DEFAULT_TOL, jobs: int = 1) -> VerificationReport:
    """Commutation residuals, independence rank and involution table in one report."""
    spec = spec or SampleSpec()
    Q, P = sample_arrays(spec, model.N, jobs)
    fields = [model.hamiltonian] + [i.field for i in model.integrals]
    grads = _grads(fields, Q, P, jobs)
    gh = grads[0]
    integrals = [
        {"label": i.label, "order": i.order, "max_residual": float(normalized_bracket(gh, g).max())}
        for i, g in zip(model.integrals, grads[1:])
    ]
    m = min(spec.count, RANK_POINTS)
    rank = rank_statistics_from(grads, m, model.expected_rank)
    k = len(fields)
    table = [[0.0] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            table[a][b] = table[b][a] = float(normalized_bracket(grads[a], grads[b]).max())
    ok = all(item["max_residual"] <= tol for item in integrals) and rank["fraction"] >= RANK_FRACTION
    ok = ok and all(math.isfinite(item["max_residual"]) for item in integrals)
    return VerificationReport(
        model=model.name,
        params=dict(model.params),
        seed=int(spec.seed),
        samples=int(spec.count),
        tol=float(tol),
        integrals=integrals,
        rank=rank,
        involution=table,
        involution_labels=["H"] + model.labels(),
        passed=bool(ok),
    )


def rank_statistics_from(grads, m: int, expected: int) -> dict:
    ranks = rank_from_gradients([g[:m] for g in grads])
    return {
        "expected": int(expected),
        "observed_min": int(ranks.min()),
        "fraction": float(np.mean(ranks == expected)),
    }


def corrupted(model: Model, label: str, perturbation: PhaseField, suffix: str = "+corrupt") -> Model:
    """Copy of ``model`` with integral ``label`` replaced by ``I + perturbation``."""
    new = []
    for item in model.integrals:
        if item.label == label:
            item = Integral(item.label + suffix, (item.field + perturbation).renamed(item.label + suffix), item.order)
        new.append(item)
    return model.with_integrals(new, name=model.name + suffix)
