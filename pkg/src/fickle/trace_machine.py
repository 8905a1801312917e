"""Pinball dynamics of diagonalization traces, their ordinal cost, and layer plans.

A follower generates a trace of balls.  Join rules force the trace to grow,
gates stop traces that would injure both of their sides, and a stopped
trace is split into a head that keeps waiting and a tail that drops further.
Every simultaneous enumeration costs one permission.

Machine files are line based::

    gate <name> <side0> <side1> [computing=<letters>]   # highest priority first
    join <X> <options>                                  # X needs a ball in one of options first
    follower <X>
    restrain <letters>                                  # targets unavailable before realization
    rho_size <n>

Scripts hold one event per line: ``grow``, ``realize``, ``permit``,
``reopen <gate-name>``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .lattice_core import ParseError
from .ordinal import OMEGA, ONE, ZERO, Ordinal, ord_add, ord_mul, ord_omega_pow, ordinal

__all__ = [
    "Ball", "Trace", "Gate", "MachineConfig", "Event", "EnumerationLog", "ExtensionConflict",
    "parse_config", "parse_script", "completing_script", "format_script", "extend_trace", "partition_trace", "run",
    "fickleness_bound", "permission_ceiling", "rho_ceiling", "bound_factors", "factor_product",
    "LayerSchedule", "layer_plan", "peel_game", "DEFENDED", "BREACHED",
]


class ExtensionConflict(RuntimeError):
    """Every target a join rule allows is forbidden."""


@dataclass(frozen=True)
class Ball:
    id: int
    target: str
    code: str = ""


@dataclass(frozen=True)
class Trace:
    balls: tuple = ()

    @classmethod
    def of(cls, letters: str, start: int = 0) -> "Trace":
        return cls(tuple(Ball(start + i, ch.upper()) for i, ch in enumerate(letters)))

    @property
    def targets(self) -> str:
        return "".join(b.target for b in self.balls)

    def __str__(self):
        return self.targets.lower()

    def __len__(self):
        return len(self.balls)

    def __bool__(self):
        return bool(self.balls)


@dataclass(frozen=True)
class Gate:
    name: str
    side0: frozenset
    side1: frozenset
    computing: frozenset = frozenset()

    def __post_init__(self):
        s0, s1 = self.effective
        if s0 & s1:
            raise ValueError(f"gate {self.name}: sides overlap outside the computing set")

    @property
    def effective(self) -> tuple:
        # computing sets never stop a trace: their balls are picked as followers only
        return self.side0 - self.computing, self.side1 - self.computing

    def touched(self, targets) -> tuple:
        s0, s1 = self.effective
        t = set(targets)
        return bool(t & s0), bool(t & s1)

    def blocks(self, targets) -> bool:
        return all(self.touched(targets))

    def side_of(self, targets) -> frozenset:
        """Full side set touched by one-sided ``targets`` (empty if neither)."""
        hit0, hit1 = self.touched(targets)
        if hit0 and hit1:
            raise ValueError(f"gate {self.name}: targets touch both sides")
        return self.side0 if hit0 else self.side1 if hit1 else frozenset()


@dataclass(frozen=True)
class MachineConfig:
    gates: tuple            # highest priority first
    joins: dict             # target -> tuple of allowed predecessor targets
    follower: str
    rho_size: int
    restrain: frozenset = frozenset()

    def __post_init__(self):
        names = [g.name for g in self.gates]
        if len(set(names)) != len(names):
            raise ValueError("duplicate gate name")
        if self.rho_size <= len(self.gates):
            raise ValueError("rho_size must exceed the number of gates")

    def gate_index(self, name: str) -> int:
        for i, g in enumerate(self.gates):
            if g.name == name:
                return i
        raise KeyError(name)


_LETTERS = re.compile(r"^[A-Z]+$")


def _letters(tok: str, lineno: int) -> frozenset:
    if not _LETTERS.match(tok):
        raise ParseError(f"expected generator letters, got {tok!r}", lineno)
    return frozenset(tok)


def parse_config(text: str) -> MachineConfig:
    gates, joins = [], {}
    follower = rho = None
    restrain = frozenset()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *rest = line.split()
        if word == "gate":
            if len(rest) not in (3, 4):
                raise ParseError("gate needs a name, two sides and an optional computing=", lineno)
            computing = frozenset()
            if len(rest) == 4:
                if not rest[3].startswith("computing="):
                    raise ParseError(f"unexpected {rest[3]!r}", lineno)
                computing = _letters(rest[3][len("computing="):], lineno)
            try:
                gates.append(Gate(rest[0], _letters(rest[1], lineno), _letters(rest[2], lineno), computing))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        elif word == "join":
            if len(rest) != 2 or len(rest[0]) != 1:
                raise ParseError("join needs a target letter and its options", lineno)
            x = next(iter(_letters(rest[0], lineno)))
            if x in joins:
                raise ParseError(f"second join rule for {x}", lineno)
            joins[x] = tuple(sorted(_letters(rest[1], lineno) - {x}))
        elif word == "follower":
            if len(rest) != 1 or len(rest[0]) != 1:
                raise ParseError("follower needs one letter", lineno)
            follower = next(iter(_letters(rest[0], lineno)))
        elif word == "restrain":
            if len(rest) != 1:
                raise ParseError("restrain needs letters", lineno)
            restrain = _letters(rest[0], lineno)
        elif word == "rho_size":
            if len(rest) != 1 or not rest[0].isdigit():
                raise ParseError("rho_size needs a natural number", lineno)
            rho = int(rest[0])
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    if follower is None:
        raise ParseError("missing follower", 0)
    if rho is None:
        rho = len(gates) + 1
    try:
        return MachineConfig(tuple(gates), joins, follower, rho, restrain)
    except ValueError as exc:
        raise ParseError(str(exc), 0) from None


def parse_script(text: str) -> list:
    """List of ``(event, argument)`` pairs."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in ("grow", "realize", "permit") and len(parts) == 1:
            out.append((parts[0], None))
        elif parts[0] == "reopen" and len(parts) == 2:
            out.append(("reopen", parts[1]))
        else:
            raise ParseError(f"bad event {line!r}", lineno)
    return out


# -- trace rules ------------------------------------------------------------

def _next_target(targets: str, joins: dict, forbidden) -> str | None:
    """Target of the ball the last one needs, or None if it needs none."""
    if not targets or targets[-1] not in joins:
        return None
    last = targets[-1]
    allowed = [y for y in joins[last] if y not in forbidden]
    if not allowed:
        raise ExtensionConflict(f"{last} needs one of {''.join(joins[last])}, all forbidden")
    free = [y for y in allowed if y not in joins]
    if free:
        return free[0]
    prev = targets[-2] if len(targets) > 1 else None
    fresh = [y for y in allowed if y != prev]
    return (fresh or allowed)[0]


def extend_trace(t: Trace, joins: dict, forbidden=frozenset(), code: str = "") -> Trace:
    """One extension step; unchanged if the last ball's target has no join rule."""
    y = _next_target(t.targets, joins, forbidden)
    if y is None:
        return t
    next_id = max((b.id for b in t.balls), default=-1) + 1
    return Trace(t.balls + (Ball(next_id, y, code),))


def partition_trace(t: Trace, g: Gate) -> tuple:
    """Split into (head, tail) with the longest tail that touches at most one side of ``g``."""
    cut = len(t.balls)
    while cut > 0 and not g.blocks(t.targets[cut - 1:]):
        cut -= 1
    return Trace(t.balls[:cut]), Trace(t.balls[cut:])


def _stopping_gate(gates, targets, below: int) -> int:
    """Index of the first gate at or below ``below`` that stops ``targets``; -1 if none."""
    for i in range(below, -1, -1):
        if gates[i].blocks(targets):
            return i
    return -1


# -- run --------------------------------------------------------------------

@dataclass(frozen=True)
class Event:
    kind: str
    gate: str | None = None
    trace: str = ""
    balls: tuple = ()
    detail: str = ""

    def as_dict(self) -> dict:
        out = {"event": self.kind}
        if self.gate is not None:
            out["gate"] = self.gate
        if self.trace:
            out["trace"] = self.trace
        if self.balls:
            out["balls"] = list(self.balls)
        if self.detail:
            out["detail"] = self.detail
        return out

    def render(self) -> str:
        bits = [self.kind]
        if self.gate is not None:
            bits.append(f"@{self.gate}")
        if self.trace:
            bits.append(self.trace)
        if self.detail:
            bits.append(f"({self.detail})")
        return " ".join(bits)


@dataclass
class EnumerationLog:
    events: list = field(default_factory=list)
    permissions_used: int = 0
    finished: bool = False
    enumerations: list = field(default_factory=list)   # (ball tuple, gate indices passed)

    def as_dict(self) -> dict:
        return {"events": [e.as_dict() for e in self.events],
                "permissions_used": self.permissions_used,
                "finished": self.finished}

    def render(self) -> str:
        lines = [e.render() for e in self.events]
        lines.append(f"permissions used: {self.permissions_used}")
        if not self.finished:
            lines.append("unfinished: script ended before the follower was enumerated")
        return "\n".join(lines)


@dataclass
class _Frame:
    balls: tuple
    gate: int                       # index of the gate it waits at, -1 once past all
    entered: int = -1               # first gate it dropped through
    pending: frozenset = frozenset()  # side its dropped tail will injure
    has_tail: bool = False


class _Machine:
    def __init__(self, config: MachineConfig):
        self.cfg = config
        self.log = EnumerationLog()
        self.closed = {}            # gate index -> injured side
        self.next_id = 0
        self.realized = False
        self.stack = []
        self.trace = ()
        self.retarget_due = False
        follower = self._ball(config.follower, "follower")
        self.trace = (follower,)
        self._emit("appoint", trace=self._str(self.trace))
        self._grow_initial()

    # helpers
    def _ball(self, target, code):
        b = Ball(self.next_id, target, code)
        self.next_id += 1
        return b

    @staticmethod
    def _str(balls) -> str:
        return "".join(b.target.lower() for b in balls)

    def _emit(self, kind, gate=None, **kw):
        name = self.cfg.gates[gate].name if isinstance(gate, int) and gate >= 0 else None
        self.log.events.append(Event(kind, name, **kw))

    def _extend(self, balls, forbidden, code):
        y = _next_target("".join(b.target for b in balls), self.cfg.joins, forbidden)
        if y is None:
            return balls
        return balls + (self._ball(y, code),)

    def _grow_initial(self):
        grown = self._extend(self.trace, self.cfg.restrain, "initial")
        if grown is not self.trace:
            self.trace = grown
            self._emit("extend", trace=self._str(grown))

    # descent
    def _settle(self, balls, start, entered=None):
        """Drop ``balls`` from gate ``start`` downwards and push the frame where it stops."""
        gates = self.cfg.gates
        stop = _stopping_gate(gates, "".join(b.target for b in balls), start)
        for i in range(start, stop, -1):
            self._emit("pass", i, trace=self._str(balls))
        if stop >= 0:
            self._emit("stop", stop, trace=self._str(balls))
        self.stack.append(_Frame(balls, stop, start if entered is None else entered))

    def _enumerate(self, entered, balls):
        passed = tuple(range(entered, -1, -1))
        self.log.permissions_used += 1
        self.log.enumerations.append((balls, passed))
        self._emit("enumerate", trace=self._str(balls), balls=tuple(b.id for b in balls))
        if any(b.code == "follower" for b in balls):
            self.log.finished = True

    def _resume(self):
        """Pop finished frames and restart the head underneath, if any."""
        while self.stack and not self.stack[-1].balls:
            self.stack.pop()
        if not self.stack or self.log.finished:
            return
        top = self.stack[-1]
        if top.has_tail:
            top.has_tail = False
            if top.gate >= 0 and top.pending:
                self.closed[top.gate] = top.pending
                self._emit("close", top.gate, detail="injured " + "".join(sorted(top.pending)))
            grown = self._extend(top.balls, top.pending, f"g{top.gate}")
            if grown is not top.balls:
                top.balls = grown
                self._emit("retarget", top.gate, trace=self._str(grown))

    # script events
    def grow(self):
        if not self.realized:
            grown = self._extend(self.trace, self.cfg.restrain, "initial")
            if grown is self.trace:
                self._emit("idle", detail="grow")
            else:
                self.trace = grown
                self._emit("extend", trace=self._str(grown))
            return
        top = self.stack[-1]
        if top.gate in self.closed:
            grown = self._extend(top.balls, self.closed[top.gate], f"g{top.gate}")
            if grown is not top.balls:
                top.balls = grown
                self._emit("extend", top.gate, trace=self._str(grown))
                return
        self._emit("idle", detail="grow")

    def realize(self):
        if self.realized:
            self._emit("idle", detail="realize")
            return
        self.realized = True
        self._emit("realize", trace=self._str(self.trace))
        self._settle(self.trace, len(self.cfg.gates) - 1)

    def reopen(self, name):
        i = self.cfg.gate_index(name)
        if self.closed.pop(i, None) is None:
            self._emit("idle", i, detail="reopen of an open gate")
        else:
            self._emit("reopen", i)

    def permit(self):
        if not self.realized:
            self._emit("idle", detail="permit before realization")
            return
        while True:
            top = self.stack[-1]
            if top.gate in self.closed:
                self._emit("idle", top.gate, detail="permit while gate closed")
                return
            if top.gate < 0:
                balls, top.balls = top.balls, ()
                self._enumerate(top.entered, balls)
                self._resume()
                return
            gate = self.cfg.gates[top.gate]
            head, tail = partition_trace(Trace(top.balls), gate)
            top.balls = head.balls
            if head:
                self._emit("partition", top.gate, trace=f"{head}|{tail}")
            else:
                # whole trace is one-sided here: it simply moves on
                self.stack.pop()
                self._settle(tail.balls, top.gate)
                continue
            top.pending = gate.side_of(tail.targets)
            top.has_tail = True
            self._settle(tail.balls, top.gate - 1, top.gate)
            if self.stack[-1].gate < 0:
                frame = self.stack[-1]
                balls, frame.balls = frame.balls, ()
                self._enumerate(frame.entered, balls)
                self._resume()
                return


def run(config: MachineConfig, script) -> EnumerationLog:
    """Replay ``script`` (pairs from :func:`parse_script`) and log what happens."""
    m = _Machine(config)
    for event, arg in script:
        if m.log.finished:
            break
        if event == "grow":
            m.grow()
        elif event == "realize":
            m.realize()
        elif event == "permit":
            m.permit()
        elif event == "reopen":
            m.reopen(arg)
        else:
            raise ValueError(f"unknown event {event!r}")
    if m.log.finished:
        m._emit("done")
    return m.log


def completing_script(config: MachineConfig, initial_grows: int = 0, waiting_grows: int = 0,
                      limit: int = 10_000) -> list:
    """A script that drives ``config`` to completion: grow, realize, then
    reopen whichever gate holds the active trace (after ``waiting_grows``
    ticks) and permit, until the follower is enumerated."""
    m = _Machine(config)
    script = [("grow", None)] * initial_grows + [("realize", None)]
    for _ in range(initial_grows):
        m.grow()
    m.realize()
    while not m.log.finished:
        if len(script) > limit:
            raise RuntimeError("machine did not finish")
        top = m.stack[-1]
        if top.gate in m.closed:
            for _ in range(waiting_grows):
                m.grow()
                if m.log.events[-1].kind == "idle":
                    m.log.events.pop()
                    break
                script.append(("grow", None))
            name = config.gates[top.gate].name
            script.append(("reopen", name))
            m.reopen(name)
        script.append(("permit", None))
        m.permit()
    return script


def format_script(script) -> str:
    return "".join(f"{e}\n" if a is None else f"{e} {a}\n" for e, a in script)


# -- ordinal bound ----------------------------------------------------------

_PROBE = 10     # extensions tried when a trace can grow forever


def _growth(targets: str, joins: dict, forbidden, probe: int = _PROBE) -> tuple:
    """Successive extensions under ``forbidden``: (list of grown strings, unbounded?)."""
    seen = set()
    out = [targets]
    cur = targets
    while True:
        y = _next_target(cur, joins, forbidden)
        if y is None:
            return out, False
        state = (cur[-2:], y)
        if state in seen:
            break
        seen.add(state)
        cur = cur + y
        out.append(cur)
    while len(out) <= probe:
        cur = cur + _next_target(cur, joins, forbidden)
        out.append(cur)
    return out, True


def _max(values):
    best = values[0]
    for v in values[1:]:
        if v > best:
            best = v
    return best


def _limit(values: list) -> Ordinal:
    """Supremum of a sequence that is eventually regular, read off its last terms."""
    running = []
    for v in values:
        running.append(v if not running or v > running[-1] else running[-1])
    a, b = running[-3], running[-1]
    if a == b:
        return b
    d = 0
    while d < len(a.terms) and d < len(b.terms) and a.terms[d] == b.terms[d]:
        d += 1
    prefix = Ordinal(b.terms[:d])
    exp_b = b.terms[d][0]
    exp_a = a.terms[d][0] if d < len(a.terms) else ZERO
    if exp_a == exp_b:
        return ord_add(prefix, ord_omega_pow(ord_add(exp_b, ONE)))
    exps = [r.terms[d][0] if d < len(r.terms) and Ordinal(r.terms[:d]) == prefix else ZERO
            for r in running]
    return ord_add(prefix, ord_omega_pow(_limit(exps)))


class _Cost:
    def __init__(self, config: MachineConfig, probe: int = _PROBE, capped: bool = False):
        self.gates = config.gates
        self.joins = config.joins
        self.probe = probe
        self.capped = capped        # growth stops at ``probe`` extensions: finite answer
        self.stopped = {}           # gate index -> longest trace seen stopped there
        self.clear = lru_cache(maxsize=None)(self._clear)
        self.resume = lru_cache(maxsize=None)(self._resume)

    def _clear(self, targets: str, below: int) -> Ordinal:
        stop = _stopping_gate(self.gates, targets, below)
        if stop < 0:
            return ONE
        self.stopped[stop] = max(self.stopped.get(stop, 0), len(targets))
        gate = self.gates[stop]
        head, tail = partition_trace(Trace.of(targets), gate)
        tail_cost = self.clear(tail.targets, stop - 1)
        head_cost = self.resume(head.targets, stop, gate.side_of(tail.targets))
        # the tail is paid first, so it sits at the bottom of the countdown
        return ord_add(head_cost, tail_cost)

    def _resume(self, head: str, at: int, injured: frozenset) -> Ordinal:
        grown, unbounded = _growth(head, self.joins, injured, self.probe)
        grown = grown[1:] or grown      # the first extension is forced
        values = [self.clear(t, at) for t in grown]
        return _limit(values) if unbounded and not self.capped else _max(values)

    def total(self, config: MachineConfig) -> Ordinal:
        top = len(self.gates) - 1
        initial, unbounded = _growth(config.follower, self.joins, config.restrain, self.probe)
        initial = initial[1:] or initial
        values = [self.clear(t, top) for t in initial]
        return _limit(values) if unbounded and not self.capped else _max(values)


def fickleness_bound(config: MachineConfig) -> Ordinal:
    """Least upper bound on permissions a run can use, as an ordinal.

    Computed by following the extension and partition rules symbolically:
    a head that can grow forever contributes the supremum over its lengths.
    """
    return _Cost(config).total(config)


def permission_ceiling(config: MachineConfig, growth: int) -> int:
    """Finite version of :func:`fickleness_bound` when no trace grows by more than ``growth`` balls at a time."""
    return int(_Cost(config, max(growth, 1), capped=True).total(config))


def bound_factors(config: MachineConfig) -> list:
    """Longest stopped trace per gate, lowest priority first; ``None`` for unbounded."""
    short, long = _Cost(config, _PROBE), _Cost(config, _PROBE + 4)
    short.total(config)
    long.total(config)
    out = []
    for i in range(len(config.gates) - 1, -1, -1):
        a, b = short.stopped.get(i, 0), long.stopped.get(i, 0)
        out.append(None if a != b else a)
    return out


def factor_product(factors) -> Ordinal:
    out = ONE
    for f in factors:
        if f is None:
            out = ord_mul(out, OMEGA)
        elif f:
            out = ord_mul(out, ordinal(f))
    return out


def rho_ceiling(config: MachineConfig) -> Ordinal:
    """w^ceil(rho/2) when no trace grows at every other gate, else w^rho."""
    every_gate = all(f is None for f in bound_factors(config))
    exp = config.rho_size if every_gate else -(-config.rho_size // 2)
    return ord_omega_pow(ordinal(exp))


# -- layers -----------------------------------------------------------------

DEFENDED = "defended"
BREACHED = "breached"
_SUBSCRIPTS = "ijklmnpqrs"


@dataclass(frozen=True)
class LayerSchedule:
    followers: tuple        # (name, kind, layer count), innermost first
    use_chain: tuple        # (label, position), strictly increasing positions
    digits: tuple = ()      # budget coefficients, most significant first
    mode: str = "tight"

    def layers(self) -> list:
        return [n for _, _, n in self.followers]

    def render(self) -> str:
        rows = [f"{name:<8} {kind:<3} {n} layers" for name, kind, n in self.followers]
        rows.append("use chain: " + " < ".join(label for label, _ in self.use_chain))
        return "\n".join(rows)


def _digits(budget: Ordinal) -> tuple:
    """Coefficients (m_{r-1}, ..., m_0) of a budget below w^w."""
    if not budget:
        return ()
    coeff = {}
    for exp, c in budget.terms:
        if exp.terms and exp.terms[0][0] != ZERO:
            raise ValueError("budget must be below w^w")
        coeff[exp.terms[0][1] if exp.terms else 0] = c
    r = max(coeff) + 1
    return tuple(coeff.get(k, 0) for k in range(r - 1, -1, -1))


def _follower_name(depth: int) -> str:
    return "x" if depth == 0 else "x_" + _SUBSCRIPTS[:depth]


def layer_plan(budget: Ordinal, mode: str = "tight") -> LayerSchedule:
    """Followers and layer counts guarding against ``budget`` one-at-a-time attacks.

    ``tight``: AB followers alternate with two-layer AC followers.  ``acac``
    is the variant for three joins, where each AC pair and the AB block
    after it merge into one long AC block.
    """
    digits = _digits(budget)
    if mode == "tight":
        shape = []
        for k, m in enumerate(digits):
            if k:
                shape.append(("AC", 2))
            shape.append(("AB", 2 * m + 1))
    elif mode == "acac":
        shape = [("AB" if k % 2 == 0 else "AC", 2 * m + 1) for k, m in enumerate(digits)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    followers = tuple((_follower_name(len(shape) - 1 - k), kind, n) for k, (kind, n) in enumerate(shape))
    chain, pos = [], 0
    for name, _, n in followers:
        pos += 1
        chain.append((name, pos))
        pos += n
        chain.append(("u" + name[1:], pos))
    return LayerSchedule(followers, tuple(chain), digits, mode)


def _value(digits: tuple) -> Ordinal:
    out = ZERO
    r = len(digits)
    for k, m in enumerate(digits):
        if m:
            out = ord_add(out, Ordinal(((ordinal(r - 1 - k), m),)))
    return out


def _fresh_stack(digits: tuple, level: int) -> tuple:
    """Layer counts for the followers guarding digits below ``level``."""
    stack = []
    for k in range(len(digits) - level, len(digits)):
        stack.append(2)
        stack.append(2 * digits[k] + 1)
    return tuple(stack)


def peel_game(schedule: LayerSchedule, budget: Ordinal, policy: str = "outermost-only",
              max_drop: int = 6) -> str:
    """Opponent with fickleness ``budget`` peels layers of ``schedule``.

    Each attack lowers the budget and peels the outermost surviving layer.
    When an attack crosses a limit, followers outside the one guarding that
    digit are cancelled, that follower loses at most two layers, and fresh
    followers are set up for the new lower digits.  At a limit the opponent
    may drop to any lower digit values up to ``max_drop``; every choice is
    explored.  Breached if the innermost layer is ever peeled.
    """
    if policy != "outermost-only":
        raise ValueError("only the outermost-only policy is modelled")
    if schedule.mode != "tight":
        raise ValueError("peel game is defined for tight schedules")
    digits = _digits(budget)
    expect = max(0, 2 * len(digits) - 1)
    if len(schedule.followers) != expect:
        raise ValueError(f"schedule has {len(schedule.followers)} followers, budget needs {expect}")
    r = len(digits)

    @lru_cache(maxsize=None)
    def play(ds: tuple, stack: tuple) -> bool:
        if not any(ds):
            return True
        low = max(k for k in range(r) if ds[k])     # least significant nonzero digit
        level = r - 1 - low
        if level == 0:
            nxt = ds[:-1] + (ds[-1] - 1,)
            return peel(nxt, stack, 1, len(stack))
        keep = 2 * (r - 1 - level) + 1              # followers inner to and including this digit's
        for tail in _choices(level):
            nxt = ds[:low] + (ds[low] - 1,) + tail
            if not peel(nxt, stack[:keep], 2, keep, level):
                return False
        return True

    def peel(nxt, stack, count, size, level=0) -> bool:
        stack = list(stack[:size])
        for _ in range(count):
            live = [i for i, n in enumerate(stack) if n]
            if not live or (live[-1] == 0 and stack[0] == 1):
                return False
            stack[live[-1]] -= 1
        if level:
            stack.extend(_fresh_stack(nxt, level))
        return play(nxt, tuple(stack))

    @lru_cache(maxsize=None)
    def _choices(level: int) -> list:
        return list(itertools.product(range(max_drop + 1), repeat=level))

    ok = play(digits, tuple(schedule.layers()))
    return DEFENDED if ok else BREACHED
