"""Normal forms and equivalence proofs for words of extent at most 4.

The engine follows the state-graph argument.  For a state ``s`` and a basic
generator ``g`` it finds a prefix ``N'`` of the normal sequence at
``r = [[g]] s`` and a word ``G'`` with ``N' g = G' N`` (N the normal syllable
at s), such that the states along ``G'`` sit strictly below ``level(s)``.
Chaining these steps proves ``N(r) g = N(s)`` for the full normal words, and
folding that over a word proves it equal to its normal form.

Certificates are stored lazily: each (state, generator) entry is a list of
rule instances and references to other entries, expanded on demand with an
explicit stack.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .linalg import (
    GenMatrix,
    Generator,
    Level,
    apply_generator,
    identity,
    level,
    pivot_column,
)
from .ring import DELTA, ONE, ZERO, omega_exponent_mod_delta3, residue
from .rules import (
    Derivation,
    Hg,
    Proof,
    RuleInstance,
    Xg,
    expand_steps,
    invert_steps,
    word_to_basic_proof,
)
from .synth import (
    SylHW,
    Syllable,
    apply_syllable,
    flatten,
    next_syllable,
    synthesize,
)
from .words import Word, evaluate, inverse_gen, is_basic, word_to_basic

__all__ = [
    "RewriteError",
    "InternalError",
    "StateEdge",
    "normal_edge",
    "main_lemma_step",
    "commute_normal",
    "normalize",
    "normal_form",
    "decide_equiv",
    "forbidden_residue_check",
    "Engine",
]

log = logging.getLogger(__name__)

MAX_DIM = 4


class RewriteError(ValueError):
    pass


class InternalError(AssertionError):
    """A case the completeness argument rules out was reached."""


def _W(j: int) -> Generator:
    return Generator("W", j, 0)


def _phases(counts: dict[int, int]) -> Word:
    out: list[Generator] = []
    for j in sorted(counts):
        out.extend([_W(j)] * (counts[j] % 8))
    return tuple(out)


@dataclass(frozen=True)
class StateEdge:
    source: GenMatrix
    label: Word
    target: GenMatrix
    kind: str = "normal"


def _check_state(s: GenMatrix) -> None:
    if s.n > MAX_DIM:
        raise RewriteError(f"dimension {s.n} exceeds {MAX_DIM}: the rewriting engine covers n <= 4")


def normal_edge(s: GenMatrix) -> StateEdge:
    _check_state(s)
    if s.is_identity():
        raise RewriteError("the identity state has no normal edge")
    syl = next_syllable(s)
    return StateEdge(s, syl.word(), apply_syllable(syl, s), "normal")


def forbidden_residue_check(v: Sequence) -> bool:
    """False iff the residues of delta^k v mod delta^2 are exactly {0, 1, delta, delta+1}.

    No 4-dimensional unit vector has that pattern, so this always returns True
    on valid input.
    """
    k = max(e.k for e in v)
    reps = sorted(tuple(residue(e.scaled(k), 2).rep) for e in v)
    forbidden = sorted([tuple(ZERO), tuple(ONE), tuple(DELTA), tuple(DELTA + ONE)])
    return not (len(v) == 4 and reps == forbidden)


# --------------------------------------------------------------------------
# proof helpers


def _sort_phases(p: Proof, start: int, end: int) -> int:
    """Sort the phases in word[start:end] by index and drop full turns."""
    seg = sorted(p.word[start:end], key=lambda g: g.i)
    p.arrange(start, seg)
    i = start
    while i + 8 <= end:
        if all(g == p.word[i] for g in p.word[i:i + 8]):
            p.cancel(i)
            end -= 8
        else:
            i += 1
    return end


def _pull_pairs_left(p: Proof, pos: int, m: int) -> None:
    """H[j,k] (w[j] w[k])^m at pos  ->  (w[j] w[k])^m H[j,k]."""
    for i in range(m):
        p.rw(17, "RL", pos + 2 * i)


def _h_w4(p: Proof, pos: int) -> None:
    """H[j,k] w^4[j] at pos  ->  w^4[j] w^4[k] X[j,k] H[j,k]."""
    h = p.word[pos]
    j, k = h.i, h.j
    p.insert(pos + 1, _W(k))
    p.arrange(pos + 1, (_W(j), _W(k)) * 4 + (_W(k),) * 4)
    _pull_pairs_left(p, pos, 4)
    p.rw(23, "RL", pos + 8)
    p.arrange(pos, (_W(j),) * 4 + (_W(k),) * 4)


def _cancel_word(word: Word) -> list[RuleInstance]:
    """Steps taking g g (X, H) or w^8[j] to the empty word."""
    p = Proof(word)
    if len(word) == 2 and word[0] == word[1] and word[0].kind != "W":
        p.cancel(0)
    elif len(word) == 8 and all(g == word[0] and g.kind == "W" for g in word):
        p.cancel(0)
    else:
        raise InternalError(f"expected a cancelling pair, got {word}")
    return p.steps


def _free_reduce(word: Word) -> tuple[Word, list[RuleInstance]]:
    """Cancel adjacent X X, H H and w^8 with certificate steps."""
    p = Proof(word)
    i = 0
    while i < len(p.word):
        w = p.word
        if i + 1 < len(w) and w[i] == w[i + 1] and w[i].kind != "W":
            p.cancel(i)
            i = max(0, i - 8)
            continue
        if w[i].kind == "W" and i + 8 <= len(w) and all(g == w[i] for g in w[i:i + 8]):
            p.cancel(i)
            i = max(0, i - 8)
            continue
        i += 1
    return p.word, p.steps


# --------------------------------------------------------------------------
# the local step


class _Local(NamedTuple):
    nprime: tuple  # syllables, in the order they act
    gprime: Word
    steps: tuple  # N'.g  ->  G'.N


def _odd_rows(s: GenMatrix) -> tuple[int, int, list[int], list]:
    j, col = pivot_column(s)
    k = max(e.k for e in col)
    u = [e.scaled(k) for e in col]
    odd = [i + 1 for i, x in enumerate(u) if (x.a + x.b + x.c + x.d) & 1]
    return j, k, odd, u


def _normal_prefix(r: GenMatrix, count: int) -> tuple:
    out = []
    for _ in range(count):
        syl = next_syllable(r)
        out.append(syl)
        r = apply_syllable(syl, r)
    return tuple(out)


def _commute(N: Syllable, g: Generator) -> _Local:
    p = Proof(N.word() + (g,))
    p.move(len(p.word) - 1, 0)
    p.expect((g,) + N.word())
    return _Local((N,), (g,), tuple(p.steps))


def _flat(nprime: tuple, g: Generator, gprime: Word, N: Syllable) -> _Local:
    if flatten(nprime) + (g,) != gprime + N.word():
        raise InternalError("flat case does not match")
    return _Local(nprime, gprime, ())


def _local_step(s: GenMatrix, g: Generator, N: Syllable, r: GenMatrix) -> _Local:
    if r.is_identity():
        return _flat((), g, (), N)

    # retrograde: the normal syllable at r undoes g
    Nr = next_syllable(r)
    if apply_syllable(Nr, r) == s:
        steps = [st.shifted(len(N.word())) for st in _cancel_word(Nr.word() + (g,))]
        return _Local((Nr, N), (), tuple(steps))

    j, k, odd, u = _odd_rows(s)
    if k > 0 and not forbidden_residue_check([row[j - 1] for row in s.rows]):
        raise InternalError("forbidden residue pattern in a unit column")

    if g.kind == "H":
        return _local_h(s, g, N, r, j, k, odd)
    if g.kind == "W":
        return _local_w(s, g, N, r, j, k, odd)
    return _local_x(s, g, N, r, j, k, odd, u)


def _local_h(s, g, N, r, j, k, odd) -> _Local:
    if k > 0:
        if isinstance(N, SylHW) and (N.i, N.l) == (1, 2):
            if N.z % 4 == 0:
                return _flat((), g, (), N) if N.z == 0 else _no_case(s, g)
            if N.z == 2:
                Np = _normal_prefix(r, 1)
                p = Proof(flatten(Np) + (g,))
                p.rw(26, "LR", 0)
                gp = (Xg(1, 2),) + (_W(2),) * 7 + (_W(1),)
                p.expect(gp + N.word())
                return _Local(Np, gp, tuple(p.steps))
        if 1 not in odd and 2 not in odd:
            _expect_same(r, N)
            return _commute(N, g)
        return _no_case(s, g)
    # k == 0: N is w^m[j] (X[p,j]); only p, j >= 3 reach here
    _expect_same(r, N)
    return _commute(N, g)


def _local_w(s, g, N, r, j, k, odd) -> _Local:
    if k > 0:
        if N.i == 1:
            Np = _normal_prefix(r, 1)
            if N.z >= 1:
                return _flat(Np, g, (), N)
            # H[1,l] w^3[1] w[1] = w^4[1] w^4[l] X[1,l] H[1,l]
            l = N.l
            p = Proof(flatten(Np) + (g,))
            _h_w4(p, 0)
            gp = (_W(1),) * 4 + (_W(l),) * 4 + (Xg(1, l),)
            p.expect(gp + N.word())
            return _Local(Np, gp, tuple(p.steps))
        _expect_same(r, N)
        return _commute(N, g)
    pj = _unit_row(s, j)
    if pj == 1:
        Np = _normal_prefix(r, 1)
        p = Proof(flatten(Np) + (g,))
        if j != 1:
            p.rw(11, "LR", len(p.word) - 2)  # X[1,j] w[1] -> w[j] X[1,j]
            if len(p.word) >= 9 and p.word[:8] == (_W(j),) * 8:
                p.cancel(0)
        p.expect(N.word())
        return _Local(Np, (), tuple(p.steps))
    _expect_same(r, N)
    return _commute(N, g)


def _unit_row(s: GenMatrix, j: int) -> int:
    for i, row in enumerate(s.rows):
        if row[j - 1]:
            return i + 1
    raise InternalError("zero column")


def _local_x(s, g, N, r, j, k, odd, u) -> _Local:
    a, b = g.i, g.j
    if j <= a:
        return _no_case(s, g)
    if k > 0:
        i_, l_ = N.i, N.l
        if not ({a, b} & {i_, l_}):
            _expect_same(r, N)
            return _commute(N, g)
        if (a, b) == (i_, l_):
            Np = _normal_prefix(r, 1)
            p = Proof(flatten(Np) + (g,))
            z = N.z % 4
            if z == 0:
                p.rw(18, "LR", 0)
                gp = (_W(b),) * 4
            else:
                rid = {1: 28, 2: 29, 3: 30}[z]
                p.rw(rid, "LR", 0)
                ea, eb = {1: (7, 3), 2: (6, 2), 3: (5, 1)}[z]
                gp = (_W(a),) * ea + (_W(b),) * eb + (g,)
            p.expect(gp + N.word())
            return _Local(Np, gp, tuple(p.steps))
        if a == l_ and b in odd:
            return _hard_case(s, g, N, r, u, odd)
        # one shared index: X passes the syllable and renames it
        Np = _normal_prefix(r, 1)
        p = Proof(flatten(Np) + (g,))
        p.move(len(p.word) - 1, 0)
        p.expect((g,) + N.word())
        return _Local(Np, (g,), tuple(p.steps))

    p_row = _unit_row(s, j)
    if j > b:
        if p_row not in (a, b):
            _expect_same(r, N)
            return _commute(N, g)
        Np = _normal_prefix(r, 1)
        pr = Proof(flatten(Np) + (g,))
        x = len(pr.word) - 2  # position of X[p',j]
        if p_row == a:
            pr.rw(12, "RL", x)  # X[b,j] X[a,b] -> X[a,b] X[a,j]
        else:
            pr.insert(x, g)  # X[a,b] X[a,b] X[a,j] X[a,b]
            pr.rw(12, "LR", x + 1)  # X[a,b] X[b,j] X[a,b] X[a,b]
            pr.cancel(x + 2)
        pr.move(x, 0)
        pr.expect((g,) + N.word())
        return _Local(Np, (g,), tuple(pr.steps))
    # j == b
    if p_row < a:
        Np = _normal_prefix(r, 1)
        pr = Proof(flatten(Np) + (g,))
        x = len(pr.word) - 2
        pr.rw(13, "RL", x)  # X[p,b] X[a,b] -> X[a,b] X[p,a]
        pr.rw(12, "RL", x)  # X[a,b] X[p,a] -> X[p,a] X[p,b]
        pr.move(x, 0)
        gp = (Xg(p_row, a),)
        pr.expect(gp + N.word())
        return _Local(Np, gp, tuple(pr.steps))
    if p_row == b:
        Np = _normal_prefix(r, 1)
        pr = Proof(flatten(Np) + (g,))
        pr.cancel(len(pr.word) - 2)
        pr.expect(N.word())
        return _Local(Np, (), tuple(pr.steps))
    if p_row == a:
        Np = () if pivot_column(r) is None or pivot_column(r)[0] != b else _normal_prefix(r, 1)
        return _flat(Np, g, (), N)
    return _no_case(s, g)


def _expect_same(r: GenMatrix, N: Syllable) -> None:
    if next_syllable(r) != N:
        raise InternalError(f"expected the normal syllable {N} to survive")


def _no_case(s, g) -> _Local:
    raise InternalError(f"no case of the main lemma matched for {g} at level {level(s)}")


# the two shapes of the conjugating block in the hard case
_C31 = (Hg(3, 4), Hg(1, 3), Hg(2, 4), Xg(2, 3), Hg(2, 4), Hg(1, 3), Hg(3, 4))
_C32 = (Hg(3, 4), Hg(2, 3), Hg(1, 4), Xg(2, 4), Hg(1, 4), Hg(2, 3), Hg(3, 4))


def _hard_case(s, g, N, r, u, odd) -> _Local:
    """X[2,3] at a state whose pivot column is odd in all four rows."""
    e = [omega_exponent_mod_delta3(x) for x in u]
    e1, e2, e3, e4 = e
    Np = _normal_prefix(r, 1)
    phi = Np[0].z
    m = N.z
    D = {1: -e2, 2: -e2, 3: -e3, 4: -e4}
    Dr_inv = {1: e3, 2: e3, 3: e2, 4: e4}
    count1 = (-e2) % 8 + m
    y = (-e3) % 8
    x = count1 - y
    extra = x < 0
    x %= 8
    flip = (x - phi) % 8 == 4
    if (x - phi) % 4:
        raise InternalError("phase mismatch in the hard case")
    Minv = (Xg(1, 2),) + (_W(1),) * 4 + (_W(2),) * 4 if flip else ()

    s1 = apply_syllable(N, s)
    bound = level(s)
    for C, rid in ((_C31, 31), (_C32, 32)):
        gp = Minv + _phases(Dr_inv) + C + _phases(D)
        if _path_below(gp, s1, bound):
            break
    else:
        raise InternalError("neither conjugating block stays below the level")

    p = Proof(gp + N.word())
    c0 = len(Minv) + len(_phases(Dr_inv))
    d0 = c0 + len(C)
    dlen = len(_phases(D))
    h = d0 + dlen
    # 1. push D through H[1,2]
    pairs = (-e2) % 8
    rest = (_W(3),) * ((-e3) % 8) + (_W(4),) * ((-e4) % 8)
    p.arrange(d0, rest + (_W(1), _W(2)) * pairs)
    for i in range(pairs):
        p.rw(17, "LR", h - 2 - 2 * i)
    hp = d0 + len(rest)
    p.move(hp, d0)
    # 2. C H[1,2] -> H[1,2] X[2,3]
    p.rw(rid, "RL", c0 + 1)
    p.cancel(c0)
    p.cancel(c0 + 3)
    p.cancel(c0 + 2)
    # 3. X[2,3] moves right through the phases
    xpos = c0 + 1
    end = len(p.word)
    p.move(xpos, end - 1)
    # 4. regroup the phases after H[1,2] and pull the D_r part left
    h = c0
    start = h + 1
    end = len(p.word) - 1
    if extra:
        p.insert(start, _W(1))
        end += 8
    seg = p.word[start:end]
    c = {t: sum(1 for q in seg if q.i == t) for t in (1, 2, 3, 4)}
    tail1 = c[1] - y
    assert c[2] == y
    target = (_W(1), _W(2)) * y + (_W(3),) * c[3] + (_W(4),) * c[4] + (_W(1),) * tail1
    p.arrange(start, target)
    _pull_pairs_left(p, h, y)
    h += 2 * y
    for _ in range(c[3] + c[4]):
        p.swap(h)
        h += 1
    if tail1 >= 8:
        p.cancel(h + 1)
        tail1 -= 8
    if flip:
        _h_w4(p, h)
        h += 9
    # 5. cancel D_r^-1 D_r and M^-1 M
    _sort_phases(p, len(Minv), h if not flip else h - 9)
    if flip:
        # X12 w^4[1] w^4[2] w^4[1] w^4[2] X12 H ...
        _sort_phases(p, 1, 17)
        p.cancel(0)
    p.expect(flatten(Np) + (g,))
    inv = invert_steps(p.steps)
    return _Local(Np, gp, tuple(inv))


def _path_below(word: Word, start: GenMatrix, bound: Level) -> bool:
    basic = word_to_basic(word)
    st = start
    for b in reversed(basic):
        st = apply_generator(b, st)
        if not level(st) < bound:
            return False
    return True


# --------------------------------------------------------------------------
# engine


class _Ref(NamedTuple):
    key: tuple
    offset: int


def _inverse_apply(g: Generator, M: GenMatrix) -> GenMatrix:
    for h in reversed(inverse_gen(g)):
        M = apply_generator(h, M)
    return M


@dataclass
class Engine:
    """Per-call memo of normal words and commutation certificates."""

    certify: bool = True
    _nlen: dict = field(default_factory=dict)
    _entries: dict = field(default_factory=dict)
    stats: dict = field(default_factory=lambda: {"entries": 0, "depth": 0})

    def normal_length(self, s: GenMatrix) -> int:
        chain = []
        st = s
        while st not in self._nlen:
            if st.is_identity():
                self._nlen[st] = 0
                break
            syl = next_syllable(st)
            chain.append((st, len(syl.word())))
            st = apply_syllable(syl, st)
        total = self._nlen[st]
        for node, ln in reversed(chain):
            total += ln
            self._nlen[node] = total
        return self._nlen[s]

    def main_step(self, s: GenMatrix, g: Generator) -> _Local:
        _check_state(s)
        if s.is_identity():
            raise RewriteError("identity state")
        if not is_basic(g):
            raise RewriteError(f"{g} is not a basic generator")
        N = next_syllable(s)
        r = apply_generator(g, s)
        return _local_step(s, g, N, r)

    def _build(self, s: GenMatrix, g: Generator) -> list:
        """Certificate items for N(r) g -> N(s) with r = [[g]] s."""
        if s.is_identity():
            r = apply_generator(g, s)
            syls = synthesize(r, check=False)
            return _cancel_word(flatten(syls) + (g,))
        N = next_syllable(s)
        s1 = apply_syllable(N, s)
        r = apply_generator(g, s)
        loc = _local_step(s, g, N, r)
        t = r
        for syl in loc.nprime:
            t = apply_syllable(syl, t)
        off = self.normal_length(t)
        items: list = [st.shifted(off) for st in loc.steps]
        basic = word_to_basic(loc.gprime)
        items.extend(st.shifted(off) for st in word_to_basic_proof(loc.gprime))
        basic, red = _free_reduce(basic)
        items.extend(st.shifted(off) for st in red)
        states = [s1]
        for b in reversed(basic):
            states.append(apply_generator(b, states[-1]))
        if states[-1] != t:
            raise InternalError("G' does not reach the target state")
        bound = level(s)
        for st in states:
            if not level(st) < bound:
                raise InternalError(f"G' path reaches level {level(st)} >= {bound}")
        kb = len(basic)
        for idx, b in enumerate(basic):
            i = kb - idx
            items.append(_Ref((states[i - 1], b), 0))
        return items

    def ensure(self, s: GenMatrix, g: Generator) -> None:
        """Compute the entry for (s, g) and everything it refers to."""
        work = [(s, g)]
        while work:
            key = work.pop()
            if key in self._entries:
                continue
            items = self._build(*key)
            self._entries[key] = items
            self.stats["entries"] += 1
            for it in items:
                if isinstance(it, _Ref) and it.key not in self._entries:
                    work.append(it.key)

    def expand(self, key: tuple, offset: int = 0) -> Iterator[RuleInstance]:
        """Flatten an entry into rule instances (derived rules unexpanded)."""
        stack = [(iter(self._entries[key]), offset)]
        depth = 1
        while stack:
            it, off = stack[-1]
            item = next(it, None)
            if item is None:
                stack.pop()
                continue
            if isinstance(item, _Ref):
                stack.append((iter(self._entries[item.key]), off + item.offset))
                depth = max(depth, len(stack))
            else:
                yield item.shifted(off)
        self.stats["depth"] = max(self.stats["depth"], depth)


def _check_word(w: Sequence[Generator]) -> None:
    for g in w:
        if not isinstance(g, Generator):
            raise RewriteError(f"not a generator: {g!r}")
    from .words import extent

    if extent(w) > MAX_DIM:
        raise RewriteError(f"word extent {extent(w)} exceeds {MAX_DIM}")


def normal_form(w: Sequence[Generator], n: int = MAX_DIM) -> Word:
    """Normal form without a certificate."""
    _check_word(w)
    s = _inverse_state(w, n)
    return flatten(synthesize(s, check=False))


def _inverse_state(w: Sequence[Generator], n: int) -> GenMatrix:
    M = identity(n)
    for g in w:
        M = _inverse_apply(g, M)
    return M


def commute_normal(s: GenMatrix, g: Generator, engine: Engine | None = None) -> Derivation:
    """Derivation of N(r) g = N(s) for r = [[g]] s."""
    _check_state(s)
    if not is_basic(g):
        raise RewriteError(f"{g} is not a basic generator")
    eng = engine or Engine()
    eng.ensure(s, g)
    r = apply_generator(g, s)
    start = flatten(synthesize(r, check=False)) + (g,)
    end = flatten(synthesize(s, check=False))
    return Derivation(start, end, lambda: eng.expand((s, g)))


def main_lemma_step(s: GenMatrix, g: Generator):
    """(nPrime, gPrime, cert) with cert a derivation of N' g = G' N."""
    loc = Engine().main_step(s, g)
    N = next_syllable(s)
    cert = Derivation(flatten(loc.nprime) + (g,), loc.gprime + N.word(), list(loc.steps))
    return list(loc.nprime), loc.gprime, cert


def normalize(w: Sequence[Generator], certify: bool = True, n: int = MAX_DIM,
              engine: Engine | None = None):
    """(normal form, derivation) with the derivation over rules 1-20 only.

    With ``certify=False`` the derivation is None.
    """
    w = tuple(w)
    _check_word(w)
    if not certify:
        return normal_form(w, n), None
    eng = engine or Engine()
    basic = word_to_basic(w)
    pre = word_to_basic_proof(w)
    keys = []
    cur = identity(n)
    for g in basic:
        cur = _inverse_apply(g, cur)
        keys.append((cur, g))
        eng.ensure(cur, g)
    nf = flatten(synthesize(cur, check=False))

    def steps():
        yield from pre
        for key in keys:
            yield from eng.expand(key)

    return nf, Derivation(w, nf, lambda: expand_steps(steps()))


def decide_equiv(w1: Sequence[Generator], w2: Sequence[Generator], certify: bool = True,
                 n: int = MAX_DIM):
    """(equal, derivation or None)."""
    w1, w2 = tuple(w1), tuple(w2)
    _check_word(w1)
    _check_word(w2)
    if evaluate(w1, n) != evaluate(w2, n):
        return False, None
    if not certify:
        return True, None
    eng = Engine()
    nf1, d1 = normalize(w1, True, n, eng)
    nf2, d2 = normalize(w2, True, n, eng)
    if nf1 != nf2:
        raise InternalError("equal operators with different normal forms")

    def steps():
        yield from d1.iter_steps()
        yield from invert_steps(list(d2.iter_steps()))

    return True, Derivation(w1, w2, steps)
