"""Virtual knot invariants computed from Gauss codes.

Every function here is constant on Reidemeister classes, except the raw
Kauffman bracket which picks up a factor ``-A^{+-3}`` under R1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Sequence

from .errors import TooManyCrossings
from .gauss import GaussCode, Parity, canonicalize, classical_parity
from .groups import FiniteGroup, bundled_groups
from .laurent import LaurentPolynomial
from .surface import ROTATION

__all__ = [
    "GroupPresentation",
    "InvariantReport",
    "wirtinger",
    "smith_normal_form",
    "abelianization",
    "fox_colorings",
    "odd_writhe",
    "kauffman_bracket",
    "f_polynomial",
    "rep_count",
    "peripheral_count",
    "iter_homomorphisms",
    "invariant_report",
]

DEFAULT_BRACKET_LIMIT = 16
DEFAULT_FOX = tuple(range(2, 10))

Word = tuple[tuple[int, int], ...]


def reduce_word(word: Sequence[tuple[int, int]]) -> Word:
    """Free reduction of a word of (generator index, exponent) letters."""
    out: list[tuple[int, int]] = []
    for gen, exp in word:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            total = out[-1][1] + exp
            out.pop()
            if total:
                out.append((gen, total))
        else:
            out.append((gen, exp))
    return tuple(out)


def invert_word(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


@dataclass(frozen=True)
class GroupPresentation:
    """Finitely presented group with a distinguished meridian/longitude pair.

    ``relations`` are relators (words equal to the identity).  When
    ``conjugate_generators`` is set every generator is conjugate to the
    meridian, which lets homomorphism counting restrict the search.
    """

    generators: tuple[str, ...]
    relations: tuple[Word, ...]
    meridian: Word
    longitude: Word
    conjugate_generators: bool = False

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relations)

    def exponent_matrix(self) -> list[list[int]]:
        rows = []
        for rel in self.relations:
            row = [0] * len(self.generators)
            for g, e in rel:
                row[g] += e
            rows.append(row)
        return rows

    def format_word(self, word: Word) -> str:
        if not word:
            return "1"
        return " ".join(self.generators[g] if e == 1 else f"{self.generators[g]}^{e}" for g, e in word)

    def __str__(self) -> str:
        rels = ", ".join(self.format_word(r) for r in self.relations)
        return f"< {', '.join(self.generators)} | {rels} >"


def wirtinger(code: GaussCode) -> GroupPresentation:
    """Upper Wirtinger presentation of the virtual knot group.

    Arcs run between consecutive under passes; arc ``k`` ends at the k-th
    under pass.  At a crossing with sign ``e``, over arc ``b``, incoming arc
    ``a`` and outgoing arc ``c`` the relation is ``c = b^e a b^-e``.  The
    meridian is the first arc; the longitude is the product of the ``b^e``
    met at the under passes (in the order that makes it commute with the
    meridian), times ``m^-writhe``.
    """
    code = canonicalize(code)
    n = code.n
    if n == 0:
        return GroupPresentation(("x1",), (), ((0, 1),), (), True)
    passes = code.passes
    unders = [i for i, p in enumerate(passes) if not p.over]
    over_pos = {p.crossing: i for i, p in enumerate(passes) if p.over}

    def arc_of(position: int) -> int:
        for k, u in enumerate(unders):
            if u >= position:
                return k
        return 0

    relations = []
    conjugators = []
    for k, u in enumerate(unders):
        p = passes[u]
        a, c = k, (k + 1) % n
        b = arc_of(over_pos[p.crossing])
        e = p.sign
        relations.append(reduce_word([(c, -1), (b, e), (a, 1), (b, -e)]))
        conjugators.append((b, e))
    writhe = code.writhe()
    longitude = reduce_word(list(reversed(conjugators)) + [(0, -writhe)])
    gens = tuple(f"x{k + 1}" for k in range(n))
    return GroupPresentation(gens, tuple(relations), ((0, 1),), longitude, True)


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero-or-zero diagonal of the Smith normal form (length min(rows, cols)).

    Entries are nonnegative and each divides the next; zeros come last.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if not done:
                # move the smallest remaining entry of row/column t into the pivot
                best = (t, t)
                for i in range(t, rows):
                    if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t, cols):
                    if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                        best = (t, j)
                i, j = best
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
                continue
            # divisibility: pivot must divide every remaining entry
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is not None:
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                done = False
        diag.append(abs(a[t][t]))
        t += 1
    diag += [0] * (min(rows, cols) - len(diag))
    return diag


def abelianization(pres: GroupPresentation) -> tuple[list[int], int]:
    """(torsion coefficients > 1, free rank) of the abelianized group."""
    k = len(pres.generators)
    if not pres.relations:
        return [], k
    diag = smith_normal_form(pres.exponent_matrix())
    nonzero = [d for d in diag if d]
    return [d for d in nonzero if d > 1], k - len(nonzero)


def fox_colorings(code: GaussCode, n: int) -> int:
    """Number of Fox n-colorings (solutions of 2*over = in + out over Z/n).

    Counted exactly from the Smith form of the coloring matrix:
    n^(columns - rank) times the product of gcd(d, n) over nonzero invariant
    factors d.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rows, k = _fox_rows(code)
    if not rows:
        return n ** k
    diag = smith_normal_form(rows)
    nonzero = [d for d in diag if d]
    count = n ** (k - len(nonzero))
    for d in nonzero:
        count *= gcd(d, n)
    return count


def _fox_rows(code: GaussCode) -> tuple[list[list[int]], int]:
    code = canonicalize(code)
    n = code.n
    if n == 0:
        return [], 1
    passes = code.passes
    unders = [i for i, p in enumerate(passes) if not p.over]
    over_pos = {p.crossing: i for i, p in enumerate(passes) if p.over}

    def arc_of(position: int) -> int:
        for k, u in enumerate(unders):
            if u >= position:
                return k
        return 0

    rows = []
    for k, u in enumerate(unders):
        row = [0] * n
        row[arc_of(over_pos[passes[u].crossing])] += 2
        row[k] -= 1
        row[(k + 1) % n] -= 1
        rows.append(row)
    return rows, n


def odd_writhe(code: GaussCode) -> int:
    """Sum of the signs of the odd crossings."""
    return sum(code.sign(c) for c in code.crossings() if classical_parity(code, c) is Parity.ODD)


def _smoothing_pairs(sign: int) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    # A-smoothing merges the two corners just counter-clockwise of the over
    # half-edges, so it pairs the half-edges bounding the other two corners.
    order = ROTATION[sign]
    a_pairs = [(order[k], order[(k + 1) % 4]) for k in range(4) if order[k][0] == "U"]
    b_pairs = [(order[k], order[(k + 1) % 4]) for k in range(4) if order[k][0] == "O"]
    return a_pairs, b_pairs


_SLOT = {"OO": 0, "OI": 1, "UO": 2, "UI": 3}


def _state_loop_counts(code: GaussCode) -> dict[tuple[int, int], int]:
    """Map (A-smoothings minus B-smoothings, loops) -> number of states."""
    crossings = code.crossings()
    index = {c: i for i, c in enumerate(crossings)}
    n = len(crossings)
    passes = code.passes
    length = len(passes)
    band = [0] * (4 * n)
    for i, p in enumerate(passes):
        q = passes[(i + 1) % length]
        out = 4 * index[p.crossing] + (_SLOT["OO"] if p.over else _SLOT["UO"])
        inc = 4 * index[q.crossing] + (_SLOT["OI"] if q.over else _SLOT["UI"])
        band[out] = inc
        band[inc] = out
    choices = []
    for c in crossings:
        base = 4 * index[c]
        a_pairs, b_pairs = _smoothing_pairs(code.sign(c))
        choices.append(tuple(
            [(base + _SLOT[x], base + _SLOT[y]) for x, y in pairs] for pairs in (a_pairs, b_pairs)))
    counts: dict[tuple[int, int], int] = {}
    smooth = [0] * (4 * n)
    for state in range(1 << n):
        sigma = 0
        for i in range(n):
            bit = (state >> i) & 1
            sigma += -1 if bit else 1
            for x, y in choices[i][bit]:
                smooth[x] = y
                smooth[y] = x
        seen = [False] * (4 * n)
        loops = 0
        for h in range(4 * n):
            if seen[h]:
                continue
            loops += 1
            while not seen[h]:
                seen[h] = True
                g = band[h]
                seen[g] = True
                h = smooth[g]
        counts[(sigma, loops)] = counts.get((sigma, loops), 0) + 1
    return counts


def kauffman_bracket(code: GaussCode, limit: int = DEFAULT_BRACKET_LIMIT) -> LaurentPolynomial:
    """Kauffman bracket: sum over states of A^(#A - #B) * d^(loops - 1), d = -A^2 - A^-2."""
    if code.n > limit:
        raise TooManyCrossings(f"{code.n} crossings exceeds the bracket limit {limit}")
    if code.n == 0:
        return LaurentPolynomial({0: 1})
    delta = LaurentPolynomial({2: -1, -2: -1})
    total = LaurentPolynomial()
    powers: dict[int, LaurentPolynomial] = {}
    for (sigma, loops), mult in sorted(_state_loop_counts(code).items()):
        if loops - 1 not in powers:
            powers[loops - 1] = delta ** (loops - 1)
        total = total + LaurentPolynomial.monomial(mult, sigma) * powers[loops - 1]
    return total


def f_polynomial(code: GaussCode, limit: int = DEFAULT_BRACKET_LIMIT) -> LaurentPolynomial:
    """Writhe-normalised bracket (-A^3)^(-writhe) * <K>."""
    bracket = kauffman_bracket(code, limit)
    return LaurentPolynomial.monomial(-1, 3) ** (-code.writhe()) * bracket


# --- homomorphism counting ---------------------------------------------------

def _eval(word: Word, assignment: list[int | None], group: FiniteGroup) -> int:
    x = group.identity
    for g, e in word:
        x = group.table[x][group.power(assignment[g], e)]
    return x


def iter_homomorphisms(pres: GroupPresentation, group: FiniteGroup,
                       meridian_image: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every generator assignment satisfying all relators.

    Backtracking with propagation: a relator with a single unknown letter of
    exponent +-1 determines that generator.
    """
    k = len(pres.generators)
    relators = [r for r in pres.relations if r]
    table, inverse = group.table, group.inverse
    assignment: list[int | None] = [None] * k
    occurs = [[i for i, r in enumerate(relators) if any(g == j for g, _ in r)] for j in range(k)]
    meridian_gen = pres.meridian[0][0] if pres.meridian else 0
    domains: list[list[int]] = [list(range(group.order))] * k

    def propagate(trail: list[int]) -> bool:
        queue = list(range(len(relators)))
        while queue:
            ri = queue.pop()
            rel = relators[ri]
            unknown = [pos for pos, (g, _) in enumerate(rel) if assignment[g] is None]
            if not unknown:
                if _eval(rel, assignment, group) != group.identity:
                    return False
                continue
            gens = {rel[pos][0] for pos in unknown}
            if len(gens) != 1 or len(unknown) != 1 or abs(rel[unknown[0]][1]) != 1:
                continue
            pos = unknown[0]
            gen, exp = rel[pos]
            left = _eval(rel[:pos], assignment, group)
            right = _eval(rel[pos + 1:], assignment, group)
            # left * x^exp * right = 1  =>  x^exp = left^-1 right^-1
            value = table[inverse[left]][inverse[right]]
            if exp == -1:
                value = inverse[value]
            if value not in domain_sets[gen]:
                return False
            assignment[gen] = value
            trail.append(gen)
            queue.extend(occurs[gen])
        return True

    def choose() -> int | None:
        best, best_score = None, -1
        for j in range(k):
            if assignment[j] is None:
                score = sum(1 for ri in occurs[j]
                            if sum(1 for g, _ in relators[ri] if assignment[g] is None) > 0)
                if score > best_score:
                    best, best_score = j, score
        return best

    def search() -> Iterator[tuple[int, ...]]:
        j = choose()
        if j is None:
            yield tuple(assignment)  # type: ignore[arg-type]
            return
        for value in domains[j]:
            assignment[j] = value
            trail: list[int] = []
            if propagate(trail):
                yield from search()
            for g in trail:
                assignment[g] = None
            assignment[j] = None

    starts = range(group.order) if meridian_image is None else [meridian_image]
    for start in starts:
        if pres.conjugate_generators:
            cls = sorted({table[table[g][start]][inverse[g]] for g in range(group.order)})
            domains = [cls] * k
        else:
            domains = [list(range(group.order))] * k
        domain_sets = [set(d) for d in domains]
        assignment[meridian_gen] = start
        trail: list[int] = []
        if propagate(trail):
            yield from search()
        for g in trail:
            assignment[g] = None
        assignment[meridian_gen] = None


def _count(pres: GroupPresentation, group: FiniteGroup, peripheral: bool) -> int:
    total = 0
    # conjugation permutes homomorphisms and preserves rho(longitude) = 1,
    # so count one meridian image per conjugacy class and scale
    for cls in group.conjugacy_classes():
        rep = cls[0]
        count = 0
        for hom in iter_homomorphisms(pres, group, meridian_image=rep):
            m = _eval(pres.meridian, list(hom), group)
            l = _eval(pres.longitude, list(hom), group)
            if group.table[m][l] != group.table[l][m]:
                raise AssertionError("meridian and longitude images do not commute")
            if not peripheral or l == group.identity:
                count += 1
        total += count * len(cls)
    return total


def rep_count(pres: GroupPresentation, group: FiniteGroup) -> int:
    """Number of homomorphisms from the presented group to ``group``."""
    return _count(pres, group, peripheral=False)


def peripheral_count(pres: GroupPresentation, group: FiniteGroup) -> int:
    """Number of homomorphisms sending the longitude to the identity."""
    return _count(pres, group, peripheral=True)


# --- report --------------------------------------------------------------------

@dataclass(frozen=True)
class InvariantReport:
    code: str
    odd_writhe: int
    fox_colorings: dict[int, int]
    bracket: LaurentPolynomial | None
    f_polynomial: LaurentPolynomial | None
    rep_counts: dict[str, int] = field(default_factory=dict)
    peripheral_counts: dict[str, int] = field(default_factory=dict)

    def invariant_fields(self) -> dict:
        """All fields that must be unchanged by every Reidemeister move."""
        return {
            "odd_writhe": self.odd_writhe,
            "fox_colorings": dict(self.fox_colorings),
            "f_polynomial": self.f_polynomial,
            "rep_counts": dict(self.rep_counts),
            "peripheral_counts": dict(self.peripheral_counts),
        }

    def to_dict(self) -> dict:
        out: dict = {
            "code": self.code,
            "odd_writhe": self.odd_writhe,
            "fox_colorings": {str(k): v for k, v in sorted(self.fox_colorings.items())},
            "rep_counts": dict(self.rep_counts),
            "peripheral_counts": dict(self.peripheral_counts),
        }
        if self.bracket is not None:
            out["bracket"] = self.bracket.pairs()
        if self.f_polynomial is not None:
            out["f_polynomial"] = self.f_polynomial.pairs()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def invariant_report(code: GaussCode, groups: Sequence[FiniteGroup] | None = None,
                     fox: Sequence[int] = DEFAULT_FOX, bracket: bool = True,
                     bracket_limit: int = DEFAULT_BRACKET_LIMIT) -> InvariantReport:
    groups = bundled_groups() if groups is None else list(groups)
    pres = wirtinger(code)
    raw = f = None
    if bracket:
        raw = kauffman_bracket(code, bracket_limit)
        f = LaurentPolynomial.monomial(-1, 3) ** (-code.writhe()) * raw
    return InvariantReport(
        code=str(canonicalize(code)),
        odd_writhe=odd_writhe(code),
        fox_colorings={n: fox_colorings(code, n) for n in fox},
        bracket=raw,
        f_polynomial=f,
        rep_counts={g.name: rep_count(pres, g) for g in groups},
        peripheral_counts={g.name: peripheral_count(pres, g) for g in groups},
    )
