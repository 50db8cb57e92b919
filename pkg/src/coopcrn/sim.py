"""Slot-loop driver, summary statistics, theorem bounds and parameter sweeps."""
from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np

from . import elastic, inelastic
from .elastic import ElasticParams
from .inelastic import InelasticParams
from .oracle import OracleSolution, elastic_optimum, inelastic_optimum
from .queueing import (ElasticQueues, InelasticQueues, step_elastic, step_inelastic,
                       step_transport)
from .topology import CrnTopology, RouteSet, hop_layout, validate_topology
from .utility import UtilitySpec

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MODELS = ("inelastic", "elastic")
SOURCE_MODES = ("backlogged", "arbitrary")


class BoundViolation(RuntimeError):
    """A deterministic buffer bound failed in a strict run."""

    def __init__(self, slot: int, detail: str):
        super().__init__(f"slot {slot}: {detail}")
        self.slot = slot


@dataclass(frozen=True)
class ArrivalSpec:
    kind: str = "bernoulli"  # "bernoulli": batch w.p. p; "constant": c every slot
    p: float = 0.0
    batch: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if self.kind not in ("bernoulli", "constant"):
            raise ValueError(f"unknown arrival process {self.kind!r}")
        if not 0 <= self.p <= 1 or self.batch < 0 or self.c < 0:
            raise ValueError("arrival parameters must be non-negative (p in [0, 1])")

    @property
    def mean(self) -> float:
        return self.p * self.batch if self.kind == "bernoulli" else self.c

    @property
    def std(self) -> float:
        if self.kind == "constant":
            return 0.0
        return self.batch * math.sqrt(self.p * (1 - self.p))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "constant":
            return np.full(size, float(self.c))
        return np.where(rng.random(size) < self.p, float(self.batch), 0.0)

    @classmethod
    def from_dict(cls, doc) -> "ArrivalSpec":
        if isinstance(doc, ArrivalSpec):
            return doc
        return cls(**doc)


@dataclass(frozen=True)
class SimConfig:
    topo: CrnTopology
    params: InelasticParams | ElasticParams
    model: str = "inelastic"
    routes: RouteSet | None = None
    source_mode: str = "backlogged"
    scheduler: str = "exact"
    T: int = 10_000
    seed: int = 0
    burn_in: float = 0.2
    pu_arrivals: ArrivalSpec | None = None
    su_arrivals: tuple = ()  # one ArrivalSpec per SU, or a single shared one
    strict: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.source_mode not in SOURCE_MODES:
            raise ValueError(f"source_mode must be one of {SOURCE_MODES}")
        if self.scheduler not in ("exact", "gmm"):
            raise ValueError("scheduler must be 'exact' or 'gmm'")
        if int(self.T) < 1:
            raise ValueError("horizon T must be at least 1 slot")
        if not 0 <= self.burn_in < 1:
            raise ValueError("burn_in must lie in [0, 1)")
        want = InelasticParams if self.model == "inelastic" else ElasticParams
        if not isinstance(self.params, want):
            raise TypeError(f"{self.model} model needs {want.__name__}")
        if self.model == "elastic" and self.routes is None:
            raise ValueError("elastic model needs a route set")
        problems = validate_topology(self.topo, self.routes)
        if problems:
            raise ValueError("invalid instance: " + "; ".join(problems))
        if isinstance(self.su_arrivals, ArrivalSpec):
            object.__setattr__(self, "su_arrivals", (self.su_arrivals,))
        if self.arbitrary and self.pu_arrivals is None:
            raise ValueError("arbitrary-arrival mode needs PU and SU arrival processes")

    @property
    def arbitrary(self) -> bool:
        return self.source_mode == "arbitrary"

    @property
    def burn_in_slots(self) -> int:
        return int(self.burn_in * self.T)

    @property
    def u_bound(self) -> float:
        p = self.params
        if self.model == "inelastic":
            return p.q_M
        return (2 * p.mu_M if self.arbitrary else p.mu_M) + p.V2

    def su_arrival(self, l: int) -> ArrivalSpec:
        if not self.su_arrivals:
            return ArrivalSpec("constant", c=0.0)
        return self.su_arrivals[l] if len(self.su_arrivals) > 1 else self.su_arrivals[0]


@dataclass
class SummaryStats:
    model: str
    source_mode: str
    scheduler: str
    T: int
    seed: int
    burn_in_slots: int
    pu_rate: float  # time-average total PU admission
    route_rates: list
    delivered_rate: float
    su_rates: list  # time-average arrivals admitted to each Q_l
    su_service_rates: list
    pu_utility: float | None
    su_utility: float | None
    avg_backlog: dict
    max_u_backlog: float
    u_bound: float
    violations: int
    max_transport: dict
    delay: dict
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@dataclass
class SimResult:
    stats: SummaryStats
    records: dict
    final_state: object = None
    end_records: dict = field(default_factory=dict)

    def write_trace(self, path) -> None:
        write_trace(path, self.records, self.end_records)


def _initial_state(cfg: SimConfig):
    if cfg.model == "inelastic":
        return InelasticQueues.zeros(cfg.topo, cfg.arbitrary)
    return ElasticQueues.zeros(cfg.topo, hop_layout(cfg.topo, cfg.routes), cfg.arbitrary)


def _draw_arrivals(cfg: SimConfig, rng: np.random.Generator):
    N, T = cfg.topo.n_su, cfg.T
    if not cfg.arbitrary:
        return np.zeros(T), np.zeros((T, N))
    E_p = cfg.pu_arrivals.sample(rng, T)
    E_l = np.column_stack([cfg.su_arrival(l).sample(rng, T) for l in range(N)]) if N else np.zeros((T, 0))
    return E_p, E_l


def run(cfg: SimConfig) -> SimResult:
    """Simulate ``cfg.T`` slots.

    Each slot reads the start-of-slot queues, runs the model's controllers,
    solves the weighted schedule, applies transfers and then admissions and
    virtual-queue updates.  The PU buffer bound is checked after every slot.
    """
    topo, p, T = cfg.topo, cfg.params, cfg.T
    N = topo.n_su
    rng = np.random.default_rng(cfg.seed)
    E_p, E_l = _draw_arrivals(cfg, rng)
    state = _initial_state(cfg)
    ela = cfg.model == "elastic"
    layout = hop_layout(topo, cfg.routes) if ela else None
    K = cfg.routes.K if ela else 1
    nu = len(state.u)
    caps = (p.W_P, p.W_S)
    bound = cfg.u_bound

    rec = {
        "U": np.empty((T, nu)), "Q": np.empty((T, N)),
        "mu": np.empty((T, K)), "A": np.empty((T, N)), "su_in": np.empty((T, N)),
        "served": np.empty((T, N)), "delivered": np.empty((T, K)),
    }
    if not ela:
        rec.update(Up=np.empty(T), Z=np.empty(T), R=np.empty(T))
    if cfg.arbitrary:
        rec.update(Wp=np.empty(T), Wl=np.empty((T, N)), Yp=np.empty(T), Yl=np.empty((T, N)),
                   up=np.empty(T), Ep=E_p, El=E_l)
        if not ela:
            rec["ul"] = np.empty((T, N))
    max_u = float(state.u.max(initial=0.0))
    max_wp = 0.0
    max_wl = 0.0
    violations = 0
    min_rate = p.min_rate if not ela else 0.0

    for t in range(T):
        rec["U"][t] = state.u
        rec["Q"][t] = state.q
        if ela:
            dec = elastic.decide(state, p, topo, layout, cfg.scheduler, E_p[t], E_l[t])
            state, flows = step_elastic(state, dec, layout, p.floor_rewards)
        else:
            rec["Up"][t] = state.u_p
            rec["Z"][t] = state.z
            dec = inelastic.decide(state, p, topo, cfg.scheduler, E_p[t], E_l[t])
            rec["R"][t] = dec.virtual_rate
            state, flows = step_inelastic(state, dec, topo, min_rate, check=False)
        if cfg.arbitrary:
            rec["Wp"][t] = state.w_p
            rec["Wl"][t] = state.w_l
            rec["Yp"][t] = state.y_p
            rec["Yl"][t] = state.y_l
            rec["up"][t] = dec.aux_pu
            if not ela:
                rec["ul"][t] = dec.aux_su
            state = step_transport(state, dec, caps)
            max_wp = max(max_wp, state.w_p)
            max_wl = max(max_wl, float(state.w_l.max(initial=0.0)))
        rec["mu"][t] = dec.pu_admission
        rec["A"][t] = dec.su_admissions
        rec["su_in"][t] = flows.su_arrivals
        rec["served"][t] = flows.su_served
        rec["delivered"][t] = flows.delivered

        top = float(state.u.max(initial=0.0))
        if top > max_u:
            max_u = top
        if top > bound:
            violations += 1
            msg = f"PU backlog {top!r} exceeds the deterministic bound {bound!r}"
            if cfg.strict:
                raise BoundViolation(t, msg)
            log.warning("slot %d: %s", t, msg)

    end = {"U": state.u[None, :].copy()}
    if cfg.arbitrary:
        end.update(Wp=np.array([state.w_p]), Wl=state.w_l[None, :].copy())
    meta = {"max_u": max_u, "violations": violations, "max_wp": max_wp, "max_wl": max_wl}
    return SimResult(summarize(rec, cfg, meta), rec, state, end)


def _mean(a: np.ndarray, b0: int):
    return a[b0:].mean(axis=0)


def summarize(rec: dict, cfg: SimConfig, meta: dict) -> SummaryStats:
    """Post-burn-in time averages from per-slot records."""
    b0 = cfg.burn_in_slots
    p = cfg.params
    N = cfg.topo.n_su
    mu = _mean(rec["mu"], b0)
    pu_rate = float(mu.sum())
    delivered = _mean(rec["delivered"], b0)
    su_in = _mean(rec["su_in"], b0)
    served = _mean(rec["served"], b0)
    U = _mean(rec["U"], b0)
    Q = _mean(rec["Q"], b0)
    avg = {"U_total": float(U.sum()), "U": U.tolist(), "Q": Q.tolist(), "Q_total": float(Q.sum())}
    for key in ("Up", "Z", "Wp", "Yp"):
        if key in rec:
            avg[key] = float(_mean(rec[key], b0))
    for key in ("Wl", "Yl"):
        if key in rec:
            avg[key] = _mean(rec[key], b0).tolist()

    def little(backlog, rate):
        return float(backlog / rate) if rate > 0 else None

    delay = {
        "pu": little(U.sum(), float(delivered.sum())),
        "su": [little(Q[l], float(served[l])) for l in range(N)],
        "pu_arrival_rate": pu_rate,
        "pu_departure_rate": float(delivered.sum()),
    }
    if cfg.model == "elastic":
        layout = hop_layout(cfg.topo, cfg.routes)
        per_route = np.bincount(layout.hop_route, weights=U, minlength=cfg.routes.K)
        delay["pu_routes"] = [little(per_route[k], float(delivered[k])) for k in range(cfg.routes.K)]
        pu_util = su_util = None
    else:
        pu_util = p.f(pu_rate)
        su_util = float(sum(p.g_l(l)(float(su_in[l])) for l in range(N)))
    return SummaryStats(
        model=cfg.model, source_mode=cfg.source_mode, scheduler=cfg.scheduler,
        T=cfg.T, seed=cfg.seed, burn_in_slots=b0,
        pu_rate=pu_rate, route_rates=mu.tolist(), delivered_rate=float(delivered.sum()),
        su_rates=su_in.tolist(), su_service_rates=served.tolist(),
        pu_utility=pu_util, su_utility=su_util,
        avg_backlog=avg, max_u_backlog=meta["max_u"], u_bound=cfg.u_bound,
        violations=meta["violations"],
        max_transport={"W_p": meta["max_wp"], "W_l": meta["max_wl"]},
        delay=delay,
    )


# ---------------------------------------------------------------- bounds

@dataclass
class TheoremBounds:
    model: str
    source_mode: str
    B: float  # the constant governing this mode (B1, B2, B3 or B4)
    B1: float | None = None
    B2: float | None = None
    B3: float | None = None
    B4: float | None = None
    V: float = 1.0
    delta: float | None = None  # delta1 (canonical) or delta2; None when unspecified or invalid
    optimum: float = 0.0  # sum_l g_l(r*_{l,eps}) or sum_k lambda*_{k,eps}
    gap_rhs: float = 0.0  # optimum - B / V
    backlog_rhs: float | None = None
    backlog_note: str = ""
    buffer_condition: bool | None = None  # q_M condition for the inelastic model

    def to_dict(self) -> dict:
        return asdict(self)


def b1_constant(p: InelasticParams, N: int) -> float:
    mu, q = p.mu_M, p.q_M
    return (0.5 * mu ** 2 + 0.5 * p.f.inverse(mu) ** 2 + mu ** 2 * (q - mu) / q
            + 0.5 * N + 0.5 * N * p.A_M ** 2 + 0.5 * mu * q * (N + 1))


def b2_constant(p: ElasticParams, N: int, K: int) -> float:
    rho = p.rho_for(K)
    return 0.5 * K * (N + 2) + 0.5 * N + 0.5 * N * p.mu_M ** 2 * float(rho.max()) ** 2


def canonical_delta1(p: InelasticParams, N: int) -> float | None:
    """Half of the open upper limit on delta1; None when the q_M condition fails."""
    num = p.epsilon * (p.q_M - p.mu_M) - p.mu_M ** 2 - N - 1
    return num / (4 * p.q_M) if num > 0 else None


def theorem_bounds(cfg: SimConfig, oracle: OracleSolution) -> TheoremBounds:
    p = cfg.params
    N = cfg.topo.n_su
    if not oracle.ok:
        raise ValueError(f"oracle status is {oracle.status}")
    if cfg.model == "inelastic":
        B1 = b1_constant(p, N)
        opt = float(sum(p.g_l(l)(float(r)) for l, r in enumerate(oracle.rates)))
        g_M = float(sum(p.g_l(l)(p.A_M) - p.g_l(l)(float(r)) for l, r in enumerate(oracle.rates)))
        b = TheoremBounds("inelastic", cfg.source_mode, B=B1, B1=B1, V=p.V1, optimum=opt,
                          buffer_condition=p.buffer_condition(N))
        if cfg.arbitrary:
            b.B3 = b.B = B1 + N * p.A_M ** 2 + p.mu_M ** 2
            b.backlog_note = "delta3 unspecified; backlog bound informational"
        else:
            b.delta = canonical_delta1(p, N)
            if b.delta is None:
                b.backlog_note = "q_M condition fails; backlog bound not applicable"
            else:
                b.backlog_rhs = (B1 + p.V1 * g_M) / b.delta
    else:
        K = cfg.routes.K
        B2 = b2_constant(p, N, K)
        opt = float(np.sum(oracle.rates))
        b = TheoremBounds("elastic", cfg.source_mode, B=B2, B2=B2, V=p.V2, optimum=opt)
        if cfg.arbitrary:
            b.B4 = b.B = B2 + p.mu_M ** 2 + N * p.A_M ** 2
            b.backlog_note = "delta4 unspecified; backlog bound informational"
        else:
            rho_min = float(p.rho_for(K).min())
            if rho_min <= 0:
                b.backlog_note = "some rho_k = 0; backlog bound vacuous"
            else:
                b.delta = p.epsilon * rho_min
                b.backlog_rhs = (B2 + p.V2 * (p.mu_M - opt)) / b.delta
    b.gap_rhs = b.optimum - b.B / b.V
    return b


@dataclass
class Check:
    name: str
    lhs: float
    rhs: float | None
    passed: bool
    asserted: bool = True


@dataclass
class BoundReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.asserted)

    def add(self, name, lhs, rhs, op, asserted=True):
        ok = True if rhs is None else (lhs >= rhs if op == ">=" else lhs <= rhs)
        self.checks.append(Check(name, float(lhs), None if rhs is None else float(rhs), bool(ok),
                                 asserted and rhs is not None))

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            if not c.asserted:
                tag = "INFO"
            out.append(f"{tag} {c.name}: {c.lhs:.6g} vs {c.rhs if c.rhs is None else format(c.rhs, '.6g')}")
        return out


def verify_bounds(stats: SummaryStats, bounds: TheoremBounds, oracle: OracleSolution | None = None,
                  params=None, min_utility_tol: float = 0.02) -> BoundReport:
    """Compare a run's summary against the deterministic and asymptotic bounds."""
    rep = BoundReport()
    rep.add("buffer_bound", stats.max_u_backlog, stats.u_bound, "<=")
    rep.add("bound_violations", stats.violations, 0, "<=")
    if bounds.model == "inelastic":
        name = "utility_gap_thm3" if bounds.source_mode == "arbitrary" else "utility_gap"
        rep.add(name, stats.su_utility, bounds.gap_rhs, ">=")
        if params is not None:
            rep.add("min_utility", stats.pu_utility, params.a_P - min_utility_tol, ">=")
        lhs = stats.avg_backlog["Q_total"] + stats.avg_backlog.get("Up", 0.0) + stats.avg_backlog.get("Z", 0.0)
        if bounds.source_mode == "arbitrary":
            lhs += sum(stats.avg_backlog.get("Yl", [])) + stats.avg_backlog.get("Yp", 0.0)
        rep.add("backlog_bound", lhs, bounds.backlog_rhs, "<=", asserted=bounds.backlog_rhs is not None)
    else:
        name = "throughput_gap_thm4" if bounds.source_mode == "arbitrary" else "throughput_gap"
        rep.add(name, stats.pu_rate, bounds.gap_rhs, ">=")
        lhs = stats.avg_backlog["Q_total"]
        if bounds.source_mode == "arbitrary":
            lhs += sum(stats.avg_backlog.get("Yl", [])) + stats.avg_backlog.get("Yp", 0.0)
        rep.add("backlog_bound", lhs, bounds.backlog_rhs, "<=", asserted=bounds.backlog_rhs is not None)
    if stats.source_mode == "arbitrary" and params is not None:
        rep.add("transport_cap_pu", stats.max_transport["W_p"], params.W_P, "<=")
        rep.add("transport_cap_su", stats.max_transport["W_l"], params.W_S, "<=")
    return rep


def solve_oracle(cfg: SimConfig, eps: float | None = None) -> OracleSolution:
    p = cfg.params
    eps = p.epsilon if eps is None else eps
    if cfg.model == "elastic":
        return elastic_optimum(cfg.topo, cfg.routes, p.rho_for(cfg.routes.K), eps)
    return inelastic_optimum(cfg.topo, p.a_P, p.f, p.g, eps)


def evaluate(cfg: SimConfig, oracle: OracleSolution | None = None):
    """Run, derive the theorem bounds and check them: (result, bounds, report)."""
    oracle = solve_oracle(cfg) if oracle is None else oracle
    res = run(cfg)
    bounds = theorem_bounds(cfg, oracle)
    return res, bounds, verify_bounds(res.stats, bounds, oracle, cfg.params)


# ---------------------------------------------------------------- sweeps

def _sweep_point(args):
    cfg, oracle = args
    res, bounds, rep = evaluate(cfg, oracle)
    s = res.stats
    achieved = s.su_utility if cfg.model == "inelastic" else s.pu_rate
    return {
        "V": bounds.V,
        "achieved": achieved,
        "optimum": bounds.optimum,
        "gap": bounds.optimum - achieved,
        "gap_bound": bounds.B / bounds.V,
        "max_u_backlog": s.max_u_backlog,
        "u_bound": s.u_bound,
        "pu_delay": s.delay["pu"],
        "su_delay": s.delay["su"],
        "avg_q_total": s.avg_backlog["Q_total"],
        "passed": rep.passed,
    }


def sweep(base: SimConfig, values: Sequence[float], workers: int = 1) -> list[dict]:
    """One row per control-parameter value (V1 for inelastic, V2 for elastic)."""
    name = "V1" if base.model == "inelastic" else "V2"
    oracle = solve_oracle(base)
    cfgs = [replace(base, params=replace(base.params, **{name: float(v)})) for v in values]
    jobs = [(c, oracle) for c in cfgs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_sweep_point, jobs))
    return [_sweep_point(j) for j in jobs]


# ---------------------------------------------------------------- traces

_SCALAR = ("Up", "Z", "R", "Wp", "Yp", "up", "Ep")


def _rows(w, t, kind, v):
    if np.ndim(v) == 0:
        w.writerow([t, kind, 0, repr(float(v))])
    else:
        for i, x in enumerate(v):
            w.writerow([t, kind, i, repr(float(x))])


def write_trace(path, rec: dict, end: dict | None = None) -> None:
    """Per-slot CSV: slot, entity_kind, entity_id, value.

    Rows for slot ``t`` < T hold start-of-slot backlogs and the slot's
    decisions; ``end`` rows (slot T) hold the final backlogs.
    """
    T = rec["U"].shape[0]
    kinds = sorted(rec)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["slot", "entity_kind", "entity_id", "value"])
        for t in range(T):
            for kind in kinds:
                _rows(w, t, kind, rec[kind][t])
        for kind, v in sorted((end or {}).items()):
            _rows(w, T, kind, v[0])


def read_trace(path) -> tuple[dict, dict]:
    """Rebuild per-slot record arrays (and final backlogs) from a trace CSV."""
    cols: dict = {}
    last = -1
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        next(r)
        for slot, kind, ent, value in r:
            cols.setdefault(kind, {}).setdefault(int(ent), []).append((int(slot), float(value)))
            last = max(last, int(slot))
    rec, end = {}, {}
    for kind, ents in cols.items():
        series = {i: [v for s, v in ents[i] if s < last or kind not in ("U", "Wp", "Wl")]
                  for i in ents}
        finals = {i: [v for s, v in ents[i] if s == last] for i in ents}
        if kind in _SCALAR:
            rec[kind] = np.array(series[0])
        else:
            rec[kind] = np.column_stack([np.array(series[i]) for i in sorted(series)])
        if kind in ("U", "Wp", "Wl"):
            end[kind] = np.array([finals[i][0] for i in sorted(finals)])
    return rec, end


def summarize_trace(path, cfg: SimConfig) -> SummaryStats:
    """Recompute the summary of a run offline from its trace."""
    rec, end = read_trace(path)
    bound = cfg.u_bound
    post = np.vstack([rec["U"][1:], end["U"][None, :]])  # backlogs after each slot
    meta = {"max_u": float(max(rec["U"].max(initial=0.0), post.max(initial=0.0))),
            "violations": int((post.max(axis=1, initial=0.0) > bound).sum()),
            "max_wp": 0.0, "max_wl": 0.0}
    if "Wp" in rec:
        meta["max_wp"] = float(max(rec["Wp"][1:].max(initial=0.0), end["Wp"][0]))
        meta["max_wl"] = float(max(rec["Wl"][1:].max(initial=0.0), end["Wl"].max(initial=0.0)))
    return summarize(rec, cfg, meta)


# ---------------------------------------------------------------- config files

_PARAM_KEYS = {
    "inelastic": ("V1", "q_M", "mu_M", "A_M", "a_P", "f", "g", "epsilon", "W_P", "W_S"),
    "elastic": ("V2", "mu_M", "rho", "A_M", "epsilon", "W_P", "W_S", "floor_rewards"),
}


def config_from_dict(doc: dict, topo: CrnTopology, routes: RouteSet | None = None,
                     **overrides) -> SimConfig:
    """Build a :class:`SimConfig` from a JSON experiment manifest.

    ``overrides`` replace top-level fields (model, T, seed, ...) or, for
    ``V1``/``V2``, the matching parameter.  Unknown keys raise ``KeyError``.
    """
    doc = dict(doc)
    params = dict(doc.pop("params", {}))
    for key in ("V1", "V2"):
        if overrides.get(key) is not None:
            params[key] = overrides.pop(key)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    doc.update(overrides)
    model = doc.get("model", "inelastic")
    if model not in _PARAM_KEYS:
        raise ValueError(f"model must be one of {MODELS}")
    unknown = set(params) - set(_PARAM_KEYS[model])
    if unknown:
        raise KeyError(f"unknown {model} parameter(s): {sorted(unknown)}")
    if model == "inelastic":
        if "f" in params:
            params["f"] = UtilitySpec.from_dict(params["f"])
        if "g" in params:
            g = params["g"]
            params["g"] = tuple(UtilitySpec.from_dict(u) for u in (g if isinstance(g, list) else [g]))
        p = InelasticParams(**params)
    else:
        p = ElasticParams(**params)
    arrivals = doc.pop("arrivals", {}) or {}
    su = arrivals.get("su", [])
    su = tuple(ArrivalSpec.from_dict(a) for a in (su if isinstance(su, list) else [su]))
    pu = ArrivalSpec.from_dict(arrivals["pu"]) if "pu" in arrivals else None
    known = {"model", "source_mode", "scheduler", "T", "seed", "burn_in", "strict"}
    unknown = set(doc) - known
    if unknown:
        raise KeyError(f"unknown config field(s): {sorted(unknown)}")
    return SimConfig(
        topo=topo, params=p, model=model, routes=routes,
        source_mode=doc.get("source_mode", "backlogged"),
        scheduler=doc.get("scheduler", "exact"),
        T=int(doc.get("T", 10_000)), seed=int(doc.get("seed", 0)),
        burn_in=float(doc.get("burn_in", 0.2)),
        pu_arrivals=pu, su_arrivals=su, strict=bool(doc.get("strict", False)),
    )
