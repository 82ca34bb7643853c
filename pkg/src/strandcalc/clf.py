"""Symbolic calculus of cornered Lefschetz fibration decompositions.

Mapping classes are formal words: tuples of letters, each a plain symbol
or a Dehn-twist letter about a labelled cycle, with an inversion flag.
Words are stored freely reduced and written in application order, so the
word [x, y] means "x then y" (function composition y o x).  No surface
relations are imposed; word equality is sound but not complete for
mapping-class equality.

A cycle label is (prefix word, base symbol): the image of the base curve
under the prefix.  A twist letter about a labelled cycle expands as a
conjugate,

    T[w @ c]  =  w . T[c] . w^-1   (in application order),

and boundary comparisons happen on these expansions, which is exactly the
structure needed for the Hurwitz rewrite: transposing adjacent pure
twists replaces (T_z, T_z') by (T_{T_z(z')}, T_z) with outer boundary
words unchanged as reduced expanded words.

A decomposition is a tree with leaves Identity(word) or Crit(f_l, f_r,
cycle) and nodes for horizontal and vertical composition.  A critical
leaf derives its initial word f_l . f_r and resulting word
f_l . T[cycle] . f_r; horizontal composition concatenates words and
vertical composition requires the middle words to agree.  Leaves may
carry formal circle names for their left/right edges; when both sides of
a horizontal composition declare one, they must match.

evaluate maps a tree to a bimodule morphism: identity leaves to identity
morphisms of box-chains of letter bimodules, critical leaves to assigned
morphisms, horizontal composition to the box of morphisms and vertical
composition to composition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bimodules import TypeDABimodule, identity_bimodule
from .boxes import box_bimodules, box_morphisms
from .errors import (AssignmentIncomplete, BoundaryMismatch,
                     IncompatibleCycle, NotInTwistForm, ParseError)
from .morphisms import DAMorphism, compose, identity_morphism, same_shape

# --- words ----------------------------------------------------------------

Letter = tuple  # (symbol: str | Twist, inverted: bool)


def _reduce_letters(letters) -> tuple:
    stack: list = []
    for sym, inv in letters:
        if stack and stack[-1] == (sym, not inv):
            stack.pop()
        else:
            stack.append((sym, inv))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced formal word; () is the identity e."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce_letters(self.letters))

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __str__(self) -> str:
        return word_str(self)


EMPTY_WORD = Word()


@dataclass(frozen=True)
class CycleLabel:
    """A marked curve: the image of a base curve under a prefix word."""

    prefix: Word
    base: str

    def __str__(self) -> str:
        return f"{word_str(self.prefix)}@{self.base}"


@dataclass(frozen=True)
class Twist:
    """The formal (negative) Dehn twist letter about a labelled cycle."""

    cycle: CycleLabel


def concat(*words: Word) -> Word:
    letters: tuple = ()
    for w in words:
        letters += w.letters
    return Word(letters)


def inverse(w: Word) -> Word:
    return Word(tuple((sym, not inv) for sym, inv in reversed(w.letters)))


def letter(symbol: str, inverted: bool = False) -> Word:
    return Word(((symbol, inverted),))


def twist(cycle: CycleLabel, inverted: bool = False) -> Word:
    return Word(((Twist(cycle), inverted),))


def expanded(w: Word) -> tuple:
    """Expand every twist letter to conjugated base twists, then reduce."""
    out: tuple = ()
    for sym, inv in w.letters:
        out += _expand_letter(sym, inv)
    return _reduce_letters(out)


def _expand_letter(sym, inv) -> tuple:
    if isinstance(sym, Twist) and sym.cycle.prefix.letters:
        pre = expanded(sym.cycle.prefix)
        core = (Twist(CycleLabel(EMPTY_WORD, sym.cycle.base)), inv)
        back = tuple((s, not i) for s, i in reversed(pre))
        return pre + (core,) + back
    return ((sym, inv),)


def words_equal(v: Word, w: Word) -> bool:
    """Equality of freely reduced expanded words."""
    return expanded(v) == expanded(w)


def word_str(w: Word) -> str:
    if not w.letters:
        return "e"
    parts = []
    for sym, inv in w.letters:
        if isinstance(sym, Twist):
            parts.append(f"T[{sym.cycle}]")
        else:
            parts.append(sym)
        if inv:
            parts.append("'")
    return "".join(parts)


# --- word and label parsing ------------------------------------------------

def parse_word(text: str, line: int | None = None, col: int = 0) -> Word:
    """Parse juxtaposed letters with ' for inverses; `e` is the identity.

    Twist letters parse back from their printed form T[word@symbol].
    """
    text = text.strip()
    if text == "e" or text == "":
        return EMPTY_WORD
    letters = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "e":
            i += 1
            continue
        if ch == "T" and i + 1 < len(text) and text[i + 1] == "[":
            j = i + 2
            depth = 1
            while j < len(text) and depth:
                if text[j] == "[":
                    depth += 1
                elif text[j] == "]":
                    depth -= 1
                j += 1
            if depth:
                raise ParseError("unterminated twist letter", line, col + i)
            label = parse_cycle_label(text[i + 2:j - 1], line, col + i + 2)
            sym: object = Twist(label)
            i = j
        elif ch.isalnum() or ch == "_":
            sym = ch
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} in word",
                             line, col + i)
        inv = False
        if i < len(text) and text[i] == "'":
            inv = True
            i += 1
        letters.append((sym, inv))
    return Word(tuple(letters))


def parse_cycle_label(text: str, line: int | None = None,
                      col: int = 0) -> CycleLabel:
    """Parse `word@symbol` (the @ is sought outside twist brackets)."""
    depth = 0
    split = -1
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "@" and depth == 0:
            split = i
    if split < 0:
        raise ParseError(f"cycle label {text!r} lacks '@'", line, col)
    base = text[split + 1:].strip()
    if not base or not all(c.isalnum() or c == "_" for c in base):
        raise ParseError(f"bad cycle base symbol {base!r}", line, col + split)
    return CycleLabel(parse_word(text[:split], line, col), base)


# --- abstract CLFs and expression trees -------------------------------------

@dataclass(frozen=True)
class AbstractCLF:
    """Single-critical-point data {f_l, f_r, cycle}.

    Initial and resulting words are derived, never stored: the defining
    relation g = f_r o T_cycle o f_l holds by construction.
    """

    f_l: Word
    f_r: Word
    cycle: CycleLabel
    left_pmc: str | None = None
    right_pmc: str | None = None

    @property
    def initial_word(self) -> Word:
        return concat(self.f_l, self.f_r)

    @property
    def resulting_word(self) -> Word:
        return concat(self.f_l, twist(self.cycle), self.f_r)

    @property
    def is_pure_twist(self) -> bool:
        return not self.f_l and not self.f_r


def make_clf(f_l: Word, f_r: Word, cycle: CycleLabel,
             left_pmc: str | None = None,
             right_pmc: str | None = None) -> AbstractCLF:
    return AbstractCLF(f_l, f_r, cycle, left_pmc, right_pmc)


class CLFExpression:
    """Base class for decomposition trees."""


@dataclass(frozen=True)
class IdentityLeaf(CLFExpression):
    word: Word
    left_pmc: str | None = None
    right_pmc: str | None = None


@dataclass(frozen=True)
class CritLeaf(CLFExpression):
    clf: AbstractCLF


@dataclass(frozen=True)
class HComp(CLFExpression):
    left: CLFExpression
    right: CLFExpression


@dataclass(frozen=True)
class VComp(CLFExpression):
    bottom: CLFExpression
    top: CLFExpression


def initial_word(expr: CLFExpression) -> Word:
    if isinstance(expr, IdentityLeaf):
        return expr.word
    if isinstance(expr, CritLeaf):
        return expr.clf.initial_word
    if isinstance(expr, HComp):
        return concat(initial_word(expr.left), initial_word(expr.right))
    if isinstance(expr, VComp):
        return initial_word(expr.bottom)
    raise TypeError(type(expr).__name__)


def resulting_word(expr: CLFExpression) -> Word:
    if isinstance(expr, IdentityLeaf):
        return expr.word
    if isinstance(expr, CritLeaf):
        return expr.clf.resulting_word
    if isinstance(expr, HComp):
        return concat(resulting_word(expr.left), resulting_word(expr.right))
    if isinstance(expr, VComp):
        return resulting_word(expr.top)
    raise TypeError(type(expr).__name__)


def left_pmc(expr: CLFExpression) -> str | None:
    if isinstance(expr, IdentityLeaf):
        return expr.left_pmc
    if isinstance(expr, CritLeaf):
        return expr.clf.left_pmc
    if isinstance(expr, HComp):
        return left_pmc(expr.left)
    if isinstance(expr, VComp):
        return left_pmc(expr.bottom) or left_pmc(expr.top)
    raise TypeError(type(expr).__name__)


def right_pmc(expr: CLFExpression) -> str | None:
    if isinstance(expr, IdentityLeaf):
        return expr.right_pmc
    if isinstance(expr, CritLeaf):
        return expr.clf.right_pmc
    if isinstance(expr, HComp):
        return right_pmc(expr.right)
    if isinstance(expr, VComp):
        return right_pmc(expr.bottom) or right_pmc(expr.top)
    raise TypeError(type(expr).__name__)


def compose_h(e1: CLFExpression, e2: CLFExpression) -> HComp:
    """Horizontal composition; checks the shared edge's circle labels."""
    r, l = right_pmc(e1), left_pmc(e2)
    if r is not None and l is not None and r != l:
        raise BoundaryMismatch(
            f"right edge {r!r} does not match left edge {l!r}")
    return HComp(e1, e2)


def compose_v(bottom: CLFExpression, top: CLFExpression) -> VComp:
    """Vertical composition; the middle words must agree when reduced."""
    mid_b, mid_t = resulting_word(bottom), initial_word(top)
    if not words_equal(mid_b, mid_t):
        raise BoundaryMismatch(
            f"resulting word {word_str(mid_b)} does not match "
            f"initial word {word_str(mid_t)}")
    for side, a, b in (("left", left_pmc(bottom), left_pmc(top)),
                       ("right", right_pmc(bottom), right_pmc(top))):
        if a is not None and b is not None and a != b:
            raise BoundaryMismatch(
                f"{side} circles {a!r} and {b!r} differ")
    return VComp(bottom, top)


# --- rewrites ---------------------------------------------------------------

def factor_leaf(leaf: CritLeaf) -> CLFExpression:
    """Crit(f_l, f_r, z) = I(f_l) o_h Crit(e, e, z) o_h I(f_r)."""
    clf = leaf.clf
    core = CritLeaf(AbstractCLF(EMPTY_WORD, EMPTY_WORD, clf.cycle))
    return compose_h(
        compose_h(IdentityLeaf(clf.f_l, left_pmc=clf.left_pmc), core),
        IdentityLeaf(clf.f_r, right_pmc=clf.right_pmc))


def vcomp_count(expr: CLFExpression) -> int:
    if isinstance(expr, (IdentityLeaf, CritLeaf)):
        return 0
    if isinstance(expr, HComp):
        return vcomp_count(expr.left) + vcomp_count(expr.right)
    return 1 + vcomp_count(expr.bottom) + vcomp_count(expr.top)


def normalize_horizontal(expr: CLFExpression) -> CLFExpression:
    """Eliminate vertical compositions.

    Each vertical node with middle word f' becomes
    bottom o_h Identity(f'^-1) o_h top; the inverse cancels against the
    neighbours' words, so the outer boundary words are unchanged as
    reduced words, and each rewrite removes exactly one vertical node.
    """
    if isinstance(expr, (IdentityLeaf, CritLeaf)):
        return expr
    if isinstance(expr, HComp):
        return compose_h(normalize_horizontal(expr.left),
                         normalize_horizontal(expr.right))
    bottom = normalize_horizontal(expr.bottom)
    top = normalize_horizontal(expr.top)
    middle = resulting_word(bottom)
    bridge = IdentityLeaf(inverse(middle),
                          left_pmc=right_pmc(bottom),
                          right_pmc=left_pmc(top))
    return compose_h(compose_h(bottom, bridge), top)


def flatten(expr: CLFExpression) -> list[CLFExpression]:
    """Leaves of a horizontal chain, left to right."""
    if isinstance(expr, HComp):
        return flatten(expr.left) + flatten(expr.right)
    if isinstance(expr, VComp):
        raise NotInTwistForm("expression is not a horizontal chain")
    return [expr]


def chain(leaves: list[CLFExpression]) -> CLFExpression:
    if not leaves:
        return IdentityLeaf(EMPTY_WORD)
    out = leaves[0]
    for leaf in leaves[1:]:
        out = compose_h(out, leaf)
    return out


def prune_empty_identities(leaves: list[CLFExpression]) -> list[CLFExpression]:
    kept = [l for l in leaves
            if not (isinstance(l, IdentityLeaf) and not l.word)]
    return kept or [IdentityLeaf(EMPTY_WORD)]


def hurwitz(expr: CLFExpression, i: int) -> CLFExpression:
    """Transpose the pure-twist critical leaves at positions i, i+1.

    After pruning empty identities, positions i and i+1 must hold
    Crit(e, e, z) and Crit(e, e, z'); they become
    Crit(e, e, T[z].prefix(z') @ base(z')) o_h Crit(e, e, z).  The first
    cycle's twist joins the second cycle's prefix, so the expanded outer
    boundary words are unchanged.
    """
    leaves = prune_empty_identities(flatten(expr))
    if not (0 <= i and i + 1 < len(leaves)):
        raise NotInTwistForm(f"no adjacent leaves at position {i}")
    first, second = leaves[i], leaves[i + 1]
    for leaf in (first, second):
        if not (isinstance(leaf, CritLeaf) and leaf.clf.is_pure_twist):
            raise NotInTwistForm(
                "positions must hold critical leaves in pure-twist form; "
                "factor and merge identities first")
    z1, z2 = first.clf.cycle, second.clf.cycle
    twisted = CycleLabel(concat(twist(z1), z2.prefix), z2.base)
    new_first = CritLeaf(AbstractCLF(EMPTY_WORD, EMPTY_WORD, twisted,
                                     first.clf.left_pmc,
                                     first.clf.right_pmc))
    new_second = CritLeaf(AbstractCLF(EMPTY_WORD, EMPTY_WORD, z1,
                                      second.clf.left_pmc,
                                      second.clf.right_pmc))
    return chain(leaves[:i] + [new_first, new_second] + leaves[i + 2:])


def standard_form(expr: CLFExpression,
                  wg: AbstractCLF) -> tuple[CLFExpression, list[Word]]:
    """Rewrite a horizontal chain as I(f_1) o_h Wg o_h I(f_2) o_h ... .

    Wg must be a pure twist.  Every critical leaf's cycle must share Wg's
    base symbol; the leaf Crit(e, e, w@c) is replaced by
    I(u) o_h Wg o_h I(u^-1) with conjugator u = w . prefix(Wg)^-1, and
    identities merge into their neighbours.  Raises IncompatibleCycle for
    a foreign base symbol: word-level conjugation cannot decide
    mapping-class equality, so this is conservative.  Returns the
    alternating chain and the conjugators used.
    """
    if not wg.is_pure_twist:
        raise NotInTwistForm("the designated leaf must be a pure twist")
    leaves = flatten(expr)
    out: list[CLFExpression] = []
    conjugators: list[Word] = []
    pending = EMPTY_WORD
    left_label = left_pmc(expr)
    for leaf in leaves:
        if isinstance(leaf, IdentityLeaf):
            pending = concat(pending, leaf.word)
            continue
        clf = leaf.clf
        pending = concat(pending, clf.f_l)
        if clf.cycle.base != wg.cycle.base:
            raise IncompatibleCycle(
                f"cycle base {clf.cycle.base!r} differs from "
                f"{wg.cycle.base!r}")
        u = concat(clf.cycle.prefix, inverse(wg.cycle.prefix))
        conjugators.append(u)
        out.append(IdentityLeaf(concat(pending, u), left_pmc=left_label))
        left_label = None
        out.append(CritLeaf(wg))
        pending = concat(inverse(u), clf.f_r)
    out.append(IdentityLeaf(pending, left_pmc=left_label,
                            right_pmc=right_pmc(expr)))
    return chain(out), conjugators


# --- evaluation --------------------------------------------------------------

class CLFAssignment:
    """Maps letters to bimodules and critical leaves to morphisms.

    Letters are (symbol, inverted) pairs; a twist letter's symbol is its
    Twist value.  default_letter / default_crit serve as fallbacks, which
    keeps toy assignments (everything to one bimodule, all critical
    leaves to one morphism) small.  Box-chains are cached per reduced
    word, so equal words evaluate to identical bimodule objects.
    """

    def __init__(self, base_algebra, letters=None, crits=None,
                 default_letter: TypeDABimodule | None = None,
                 default_crit: DAMorphism | None = None):
        self.base_algebra = base_algebra
        self.letters = dict(letters or {})
        self.crits = dict(crits or {})
        self.default_letter = default_letter
        self.default_crit = default_crit
        self._cache: dict[tuple, TypeDABimodule] = {}

    def letter_bimodule(self, lt) -> TypeDABimodule:
        got = self.letters.get(lt, self.default_letter)
        if got is None:
            raise AssignmentIncomplete(
                f"no bimodule assigned to letter "
                f"{word_str(Word((lt,)))!r}")
        return got

    def word_bimodule(self, w: Word) -> TypeDABimodule:
        key = w.letters
        if key not in self._cache:
            if not key:
                value = identity_bimodule(self.base_algebra)
            else:
                value = self.letter_bimodule(key[0])
                for lt in key[1:]:
                    value = box_bimodules(value, self.letter_bimodule(lt))
            self._cache[key] = value
        return self._cache[key]

    def crit_morphism(self, clf: AbstractCLF) -> DAMorphism:
        got = self.crits.get(clf, self.default_crit)
        if got is None:
            raise AssignmentIncomplete(
                f"no morphism assigned to critical leaf with cycle "
                f"{clf.cycle}")
        return got


def evaluate(expr: CLFExpression, assignment: CLFAssignment) -> DAMorphism:
    """Map a decomposition tree to a bimodule morphism.

    Identity leaves become identity morphisms of their word's box-chain;
    critical leaves take their assigned morphism, whose source and target
    must match the chains of the leaf's initial and resulting words;
    horizontal composition becomes the box of morphisms and vertical
    composition becomes composition.
    """
    if isinstance(expr, IdentityLeaf):
        return identity_morphism(assignment.word_bimodule(expr.word))
    if isinstance(expr, CritLeaf):
        F = assignment.crit_morphism(expr.clf)
        want_src = assignment.word_bimodule(expr.clf.initial_word)
        want_tgt = assignment.word_bimodule(expr.clf.resulting_word)
        if not (same_shape(F.source, want_src)
                and same_shape(F.target, want_tgt)):
            raise BoundaryMismatch(
                "assigned morphism does not match the leaf's boundary words")
        return F
    if isinstance(expr, HComp):
        return box_morphisms(evaluate(expr.left, assignment),
                             evaluate(expr.right, assignment))
    if isinstance(expr, VComp):
        return compose(evaluate(expr.top, assignment),
                       evaluate(expr.bottom, assignment))
    raise TypeError(type(expr).__name__)


# --- expression text form -----------------------------------------------------

def expression_str(expr: CLFExpression) -> str:
    if isinstance(expr, IdentityLeaf):
        return f"ID({word_str(expr.word)})"
    if isinstance(expr, CritLeaf):
        clf = expr.clf
        return (f"CRIT(fl={word_str(clf.f_l)}, fr={word_str(clf.f_r)}, "
                f"vc={clf.cycle})")
    if isinstance(expr, HComp):
        return f"H({expression_str(expr.left)}, {expression_str(expr.right)})"
    if isinstance(expr, VComp):
        return f"V({expression_str(expr.bottom)}, {expression_str(expr.top)})"
    raise TypeError(type(expr).__name__)


def parse_expression(text: str, line: int | None = None,
                     col: int = 0) -> CLFExpression:
    """Parse ID(word) | CRIT(fl=.., fr=.., vc=..) | H(e1, e2) | V(e1, e2)."""
    expr, rest = _parse_expr(text.strip(), line, col)
    if rest.strip():
        raise ParseError(f"trailing input {rest.strip()!r}", line, col)
    return expr


def _split_args(body: str, line, col) -> list[str]:
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    parts.append(body[start:])
    return parts


def _parse_expr(text: str, line, col) -> tuple[CLFExpression, str]:
    text = text.lstrip()
    for head in ("ID", "CRIT", "H", "V"):
        if text.startswith(head + "("):
            depth = 0
            for i in range(len(head), len(text)):
                if text[i] == "(":
                    depth += 1
                elif text[i] == ")":
                    depth -= 1
                    if depth == 0:
                        body = text[len(head) + 1:i]
                        rest = text[i + 1:]
                        return _parse_head(head, body, line, col), rest
            raise ParseError("unbalanced parentheses", line, col)
    raise ParseError(f"expected ID/CRIT/H/V at {text[:20]!r}", line, col)


def _parse_head(head: str, body: str, line, col) -> CLFExpression:
    if head == "ID":
        return IdentityLeaf(parse_word(body, line, col))
    if head == "CRIT":
        fields = {"fl": EMPTY_WORD, "fr": EMPTY_WORD}
        cycle = None
        for part in _split_args(body, line, col):
            if "=" not in part:
                raise ParseError(f"bad CRIT field {part!r}", line, col)
            key, _, value = part.partition("=")
            key = key.strip()
            value = value.strip()
            if key in ("fl", "fr"):
                fields[key] = parse_word(value, line, col)
            elif key == "vc":
                cycle = parse_cycle_label(value, line, col)
            else:
                raise ParseError(f"unknown CRIT field {key!r}", line, col)
        if cycle is None:
            raise ParseError("CRIT needs vc=word@symbol", line, col)
        return CritLeaf(AbstractCLF(fields["fl"], fields["fr"], cycle))
    args = _split_args(body, line, col)
    if len(args) != 2:
        raise ParseError(f"{head} takes two arguments", line, col)
    e1 = parse_expression(args[0], line, col)
    e2 = parse_expression(args[1], line, col)
    if head == "H":
        return compose_h(e1, e2)
    return compose_v(e1, e2)
