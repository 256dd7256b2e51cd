"""Control-flow graphs, dependence computation, and PDG assembly.

Control dependence follows the postdominator formulation: Y is control
dependent on X iff some successor S of X satisfies Y postdom S while
Y does not postdom X (postdominance taken reflexively). It is computed
from the immediate-postdominator tree with the usual edge walk; the
test suite checks it against a brute-force fixed-point oracle.

Data dependence for locals is flow-sensitive reaching definitions.
Field dependence is deliberately coarse: every store to a field feeds
every load of that field, program-wide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple

from . import slir
from .slir import SlirMethod, SlirProgram, Stmt

ENTRY = -1  # synthetic CFG entry node; the exit node is len(statements)

FALLTHROUGH = "fallthrough"
BRANCH_TAKEN = "branch-taken"


class CfgEdge(NamedTuple):
    src: int
    dst: int
    kind: str


@dataclass(frozen=True)
class Cfg:
    method: str
    num_statements: int
    edges: tuple[CfgEdge, ...]
    # Statements with no path to exit get a synthetic edge to exit so the
    # postdominance relation is total; kept apart from the real edges.
    exit_pseudo_sources: tuple[int, ...] = ()

    @property
    def exit_node(self) -> int:
        return self.num_statements

    @property
    def nodes(self) -> tuple[int, ...]:
        return (ENTRY, *range(self.num_statements), self.exit_node)

    def succ_map(self, include_pseudo: bool = False) -> dict[int, tuple[int, ...]]:
        out: dict[int, set[int]] = {n: set() for n in self.nodes}
        for e in self.edges:
            out[e.src].add(e.dst)
        if include_pseudo:
            for n in self.exit_pseudo_sources:
                out[n].add(self.exit_node)
        return {n: tuple(sorted(s)) for n, s in out.items()}

    def pred_map(self, include_pseudo: bool = False) -> dict[int, tuple[int, ...]]:
        out: dict[int, set[int]] = {n: set() for n in self.nodes}
        for n, succs in self.succ_map(include_pseudo).items():
            for s in succs:
                out[s].add(n)
        return {n: tuple(sorted(s)) for n, s in out.items()}


def build_cfg(method: SlirMethod) -> Cfg:
    """Successors: straight-line -> next; Goto -> target; If -> {next, target};
    Return -> exit. A non-jump final statement falls through to exit."""
    n = len(method.statements)
    labels = slir.label_table(method)
    edges: list[CfgEdge] = [CfgEdge(ENTRY, 0 if n else n, FALLTHROUGH)]
    for i, stmt in enumerate(method.statements):
        if isinstance(stmt, slir.Return):
            edges.append(CfgEdge(i, n, FALLTHROUGH))
        elif isinstance(stmt, slir.Goto):
            edges.append(CfgEdge(i, labels[stmt.target], BRANCH_TAKEN))
        elif isinstance(stmt, slir.If):
            edges.append(CfgEdge(i, i + 1, FALLTHROUGH))
            edges.append(CfgEdge(i, labels[stmt.target], BRANCH_TAKEN))
        else:
            edges.append(CfgEdge(i, i + 1, FALLTHROUGH))
    cfg = Cfg(method.name, n, tuple(edges))
    return Cfg(method.name, n, tuple(edges), _exit_pseudo_sources(cfg))


def _exit_pseudo_sources(cfg: Cfg) -> tuple[int, ...]:
    """Smallest-index statements to patch through to exit until every node
    has a path there. Deterministic by construction."""
    pseudo: list[int] = []
    pred = cfg.pred_map()
    while True:
        reached = {cfg.exit_node}
        work = [cfg.exit_node] + pseudo
        reached.update(pseudo)
        while work:
            node = work.pop()
            for p in pred[node]:
                if p not in reached:
                    reached.add(p)
                    work.append(p)
        missing = [n for n in cfg.nodes if n not in reached and n != ENTRY]
        if not missing:
            return tuple(pseudo)
        pseudo.append(min(missing))


def reachable_statements(cfg: Cfg) -> set[int]:
    """Statement indices reachable from entry over the real CFG edges."""
    succ = cfg.succ_map()
    seen = {ENTRY}
    work = [ENTRY]
    while work:
        node = work.pop()
        for s in succ[node]:
            if s not in seen:
                seen.add(s)
                work.append(s)
    return {n for n in seen if 0 <= n < cfg.num_statements}


def unreachable_statements(cfg: Cfg) -> tuple[int, ...]:
    reach = reachable_statements(cfg)
    return tuple(i for i in range(cfg.num_statements) if i not in reach)


# ---------------------------------------------------------------------------
# Postdominance and control dependence


def _ipostdom(cfg: Cfg) -> dict[int, int]:
    """Immediate postdominators via Cooper-Harvey-Kennedy on the reversed
    (exit-augmented) graph. ipdom[exit] == exit."""
    succ = cfg.succ_map(include_pseudo=True)
    pred = cfg.pred_map(include_pseudo=True)
    root = cfg.exit_node

    # Postorder of the reversed graph from the exit root (iterative DFS).
    po_index: dict[int, int] = {}
    order: list[int] = []
    stack: list[tuple[int, Iterable[int]]] = [(root, iter(pred[root]))]
    seen = {root}
    while stack:
        node, it = stack[-1]
        advanced = False
        for nxt in it:
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, iter(pred[nxt])))
                advanced = True
                break
        if not advanced:
            stack.pop()
            po_index[node] = len(order)
            order.append(node)
    rpo = list(reversed(order))

    ipdom: dict[int, int] = {root: root}

    def intersect(a: int, b: int) -> int:
        while a != b:
            while po_index[a] < po_index[b]:
                a = ipdom[a]
            while po_index[b] < po_index[a]:
                b = ipdom[b]
        return a

    changed = True
    while changed:
        changed = False
        for node in rpo:
            if node == root:
                continue
            candidates = [s for s in succ[node] if s in ipdom]
            new = candidates[0]
            for c in candidates[1:]:
                new = intersect(new, c)
            if ipdom.get(node) != new:
                ipdom[node] = new
                changed = True
    return ipdom


def control_deps(cfg: Cfg) -> frozenset[tuple[int, int]]:
    """(controller, controlled) pairs over the exit-augmented CFG."""
    succ = cfg.succ_map(include_pseudo=True)
    ipdom = _ipostdom(cfg)
    deps: set[tuple[int, int]] = set()
    for a in cfg.nodes:
        stop = ipdom.get(a)
        if stop is None:
            continue
        for b in succ[a]:
            runner = b
            while runner != stop:
                if runner != a:
                    deps.add((a, runner))
                runner = ipdom[runner]
    return frozenset(deps)


# ---------------------------------------------------------------------------
# Reaching definitions

_ENTRY_DEF = ENTRY  # definition index standing for "parameter, defined at entry"


def _reaching_in(method: SlirMethod, cfg: Cfg) -> dict[int, set[tuple[str, int]]]:
    """IN set per statement: (local, def index) pairs, where def index
    ENTRY marks a parameter definition."""
    succ = cfg.succ_map()
    pred = cfg.pred_map()
    out: dict[int, set[tuple[str, int]]] = {n: set() for n in cfg.nodes}
    out[ENTRY] = {(p, _ENTRY_DEF) for p in method.params}
    in_: dict[int, set[tuple[str, int]]] = {n: set() for n in cfg.nodes}

    work = list(range(cfg.num_statements))
    while work:
        i = work.pop(0)
        new_in: set[tuple[str, int]] = set()
        for p in pred[i]:
            new_in |= out[p]
        in_[i] = new_in
        stmt = method.statements[i]
        defined = slir.stmt_def(stmt)
        if defined is None:
            new_out = new_in
        else:
            new_out = {(v, d) for (v, d) in new_in if v != defined} | {(defined, i)}
        if new_out != out[i]:
            out[i] = new_out
            for s in succ[i]:
                if 0 <= s < cfg.num_statements and s not in work:
                    work.append(s)
    return in_


def data_deps(method: SlirMethod, cfg: Cfg) -> frozenset[tuple[int, int, str]]:
    """(def index, use index, local) triples under reaching definitions."""
    in_ = _reaching_in(method, cfg)
    triples: set[tuple[int, int, str]] = set()
    for u, stmt in enumerate(method.statements):
        for local in slir.stmt_uses(stmt):
            for (v, d) in in_[u]:
                if v == local and d != _ENTRY_DEF:
                    triples.add((d, u, local))
    return frozenset(triples)


def param_uses(method: SlirMethod, cfg: Cfg) -> dict[str, tuple[int, ...]]:
    """Statement indices where the entry definition of each parameter is
    still live and the parameter is read."""
    in_ = _reaching_in(method, cfg)
    uses: dict[str, list[int]] = {p: [] for p in method.params}
    for u, stmt in enumerate(method.statements):
        for local in slir.stmt_uses(stmt):
            if local in uses and (local, _ENTRY_DEF) in in_[u]:
                uses[local].append(u)
    return {p: tuple(sorted(set(ix))) for p, ix in uses.items()}


# ---------------------------------------------------------------------------
# Program dependence graph


class DepKind(str, Enum):
    CONTROL = "control"
    DATA = "data"
    CALL = "call"
    PARAM_IN = "param-in"
    RETURN_OUT = "return-out"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class StmtId(NamedTuple):
    cls: str
    method: str
    index: int

    def text(self) -> str:
        return f"{self.cls}.{self.method}#{self.index}"


class PdgEdge(NamedTuple):
    src: StmtId
    dst: StmtId
    kind: DepKind
    provenance: str | None = None


@dataclass
class Pdg:
    nodes: tuple[StmtId, ...]
    edges: tuple[PdgEdge, ...]
    # Source ordering: (class position, method position, statement index).
    program_order: dict[StmtId, int]
    statements: dict[StmtId, Stmt]
    unreachable: tuple[StmtId, ...] = ()
    _succ: dict[StmtId, tuple[PdgEdge, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        succ: dict[StmtId, list[PdgEdge]] = {n: [] for n in self.nodes}
        for e in self.edges:
            succ[e.src].append(e)
        self._succ = {n: tuple(es) for n, es in succ.items()}

    def successors(self, node: StmtId) -> tuple[PdgEdge, ...]:
        return self._succ[node]


def _resolve_callee(program: SlirProgram, signature: str) -> tuple[str, str] | None:
    """Split a call signature into (class, method) if the program defines it."""
    if "." not in signature:
        return None
    cls_name, method_name = signature.rsplit(".", 1)
    for cls in program.classes:
        if cls.name == cls_name:
            for m in cls.methods:
                if m.name == method_name:
                    return cls_name, method_name
    return None


def build_pdg(program: SlirProgram) -> Pdg:
    """Union of per-method control/data dependence plus name-direct
    interprocedural edges (call, param-in, return-out) and flow-insensitive
    field edges."""
    nodes: list[StmtId] = []
    order: dict[StmtId, int] = {}
    statements: dict[StmtId, Stmt] = {}
    edges: set[PdgEdge] = set()
    unreachable: list[StmtId] = []

    cfgs: dict[tuple[str, str], Cfg] = {}
    reach_in: dict[tuple[str, str], dict[int, set[tuple[str, int]]]] = {}
    field_stores: dict[str, list[StmtId]] = {}
    field_loads: dict[str, list[StmtId]] = {}
    call_sites: list[tuple[StmtId, Stmt]] = []

    counter = 0
    for cls in program.classes:
        for method in cls.methods:
            cfg = build_cfg(method)
            cfgs[(cls.name, method.name)] = cfg
            reach_in[(cls.name, method.name)] = _reaching_in(method, cfg)
            dead = set(unreachable_statements(cfg))
            for i, stmt in enumerate(method.statements):
                sid = StmtId(cls.name, method.name, i)
                nodes.append(sid)
                order[sid] = counter
                counter += 1
                statements[sid] = stmt
                if i in dead:
                    unreachable.append(sid)
                fdef = slir.stmt_field_def(stmt)
                if fdef is not None:
                    field_stores.setdefault(fdef, []).append(sid)
                fuse = slir.stmt_field_use(stmt)
                if fuse is not None:
                    field_loads.setdefault(fuse, []).append(sid)
                if slir.call_signature(stmt) is not None:
                    call_sites.append((sid, stmt))
            for controller, controlled in control_deps(cfg):
                if 0 <= controller < cfg.num_statements and 0 <= controlled < cfg.num_statements:
                    edges.add(
                        PdgEdge(
                            StmtId(cls.name, method.name, controller),
                            StmtId(cls.name, method.name, controlled),
                            DepKind.CONTROL,
                        )
                    )
            for d, u, local in data_deps(method, cfg):
                edges.add(
                    PdgEdge(
                        StmtId(cls.name, method.name, d),
                        StmtId(cls.name, method.name, u),
                        DepKind.DATA,
                        local,
                    )
                )

    for fname, stores in field_stores.items():
        for store in stores:
            for load in field_loads.get(fname, ()):
                edges.add(PdgEdge(store, load, DepKind.DATA, fname))

    methods_by_id = {
        (cls.name, m.name): m for cls in program.classes for m in cls.methods
    }
    for site, stmt in call_sites:
        signature = slir.call_signature(stmt)
        assert signature is not None
        resolved = _resolve_callee(program, signature)
        if resolved is None:
            continue  # external signature: no interprocedural edges
        callee = methods_by_id[resolved]
        callee_cfg = cfgs[resolved]
        if callee.statements:
            edges.add(PdgEdge(site, StmtId(*resolved, 0), DepKind.CALL))
        args = stmt.args if isinstance(stmt, (slir.Call, slir.CallAssign)) else ()
        site_in = reach_in[(site.cls, site.method)][site.index]
        flows = param_uses(callee, callee_cfg)
        for arg, param in zip(args, callee.params):
            arg_defs = sorted(d for (v, d) in site_in if v == arg and d != _ENTRY_DEF)
            for d in arg_defs:
                for u in flows.get(param, ()):
                    edges.add(
                        PdgEdge(
                            StmtId(site.cls, site.method, d),
                            StmtId(*resolved, u),
                            DepKind.PARAM_IN,
                            param,
                        )
                    )
        if isinstance(stmt, slir.CallAssign):
            for i, callee_stmt in enumerate(callee.statements):
                if isinstance(callee_stmt, slir.Return) and callee_stmt.value is not None:
                    edges.add(
                        PdgEdge(StmtId(*resolved, i), site, DepKind.RETURN_OUT, callee_stmt.value)
                    )

    sorted_nodes = tuple(sorted(nodes))
    sorted_edges = tuple(sorted(edges, key=lambda e: (e.src, e.kind.value, e.dst, e.provenance or "")))
    return Pdg(sorted_nodes, sorted_edges, order, statements, tuple(sorted(unreachable)))
