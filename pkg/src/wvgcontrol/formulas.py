"""CNF formulas and the brute-force decision/counting oracles.

These oracles anchor every reduction check: exact model counting, the
minority question ("does fixing the first k variables leave at most half
of the suffix assignments satisfying?") and the exact-count variant.
Everything enumerates within an explicit variable budget and refuses
beyond it.

Input conventions, enforced at construction: a clause never contains a
variable together with its negation (such a clause would be trivially
true), and every variable of the declared range occurs in some clause.

Assignments are encoded two ways: externally as tuples of 0/1 with
position ``i`` holding variable ``x_{i+1}``, internally as bitmasks whose
bit ``i-1`` is the value of ``x_i``.  Witnesses are always the
lexicographically least prefix (all-false first).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExceededError, FormulaError, InputError

MAX_ORACLE_VARIABLES = 26
MAX_SUBSET_SUM_ITEMS = 44

Prefix = tuple[int, ...]


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula over variables ``1..num_variables``.

    Clauses are sets of nonzero literals; literal ``v`` means the variable
    is true, ``-v`` that it is false.
    """

    num_variables: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.num_variables < 1:
            raise FormulaError("a formula needs at least one variable")
        object.__setattr__(
            self, "clauses", tuple(frozenset(clause) for clause in self.clauses)
        )
        occurring: set[int] = set()
        for position, clause in enumerate(self.clauses, start=1):
            if not clause:
                raise FormulaError(f"clause {position} is empty")
            for literal in clause:
                variable = abs(literal)
                if literal == 0 or not 1 <= variable <= self.num_variables:
                    raise FormulaError(
                        f"clause {position}: literal {literal} out of range"
                    )
                occurring.add(variable)
            for literal in clause:
                if -literal in clause:
                    raise FormulaError(
                        f"clause {position} contains x{abs(literal)} and its negation "
                        "(tautological clauses are rejected)"
                    )
        missing = set(range(1, self.num_variables + 1)) - occurring
        if missing:
            raise FormulaError(
                f"variables {sorted(missing)} never occur in any clause"
            )

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def variables_of_clause(self, index: int) -> frozenset[int]:
        return frozenset(abs(lit) for lit in self.clauses[index])

    def satisfied_by(self, mask: int) -> bool:
        """Evaluate under the assignment bitmask (bit i-1 = value of x_i)."""
        for clause in self.clauses:
            for literal in clause:
                bit = (mask >> (abs(literal) - 1)) & 1
                if (literal > 0) == bool(bit):
                    break
            else:
                return False
        return True

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_variables} {self.num_clauses}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit) for lit in sorted(clause, key=abs)) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str, strip_tautologies: bool = False) -> CnfFormula:
    """Parse DIMACS cnf.

    Tautological clauses are an error by default; with
    ``strip_tautologies`` they are dropped instead (explicit
    normalisation, never silent).  Unused variables remain an error either
    way.
    """
    num_variables: int | None = None
    declared_clauses: int | None = None
    tokens: list[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_variables is not None:
                raise FormulaError(f"line {line_no}: duplicate problem line")
            match = re.fullmatch(r"p\s+cnf\s+(\d+)\s+(\d+)", line)
            if not match:
                raise FormulaError(f"line {line_no}: malformed problem line {line!r}")
            num_variables = int(match.group(1))
            declared_clauses = int(match.group(2))
            continue
        if num_variables is None:
            raise FormulaError(f"line {line_no}: clause before the problem line")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError:
            raise FormulaError(f"line {line_no}: non-integer token in {line!r}")
    if num_variables is None:
        raise FormulaError("missing problem line 'p cnf n m'")

    clauses: list[list[int]] = []
    current: list[int] = []
    for token in tokens:
        if token == 0:
            clauses.append(current)
            current = []
        else:
            current.append(token)
    if current:
        raise FormulaError("last clause is not terminated by 0")
    if declared_clauses != len(clauses):
        raise FormulaError(
            f"problem line declares {declared_clauses} clauses, found {len(clauses)}"
        )

    kept: list[frozenset[int]] = []
    for position, clause in enumerate(clauses, start=1):
        literals = frozenset(clause)
        if any(-lit in literals for lit in literals):
            if strip_tautologies:
                continue
            raise FormulaError(
                f"clause {position} is tautological; re-run with tautology "
                "stripping to drop such clauses explicitly"
            )
        kept.append(literals)
    return CnfFormula(num_variables, tuple(kept))


def _check_variable_budget(formula: CnfFormula) -> None:
    if formula.num_variables > MAX_ORACLE_VARIABLES:
        raise BudgetExceededError(
            f"oracle refuses {formula.num_variables} variables "
            f"(MAX_ORACLE_VARIABLES={MAX_ORACLE_VARIABLES})"
        )


def _variable_bitmap(variable: int, width_bits: int) -> int:
    """Bitmap over masks ``0..width_bits-1``, bit m set iff x_variable is true in m."""
    block = ((1 << (1 << (variable - 1))) - 1) << (1 << (variable - 1))
    bitmap = block
    span = 1 << variable
    while span < width_bits:
        bitmap |= bitmap << span
        span *= 2
    return bitmap


def _clause_bitmap(clause: frozenset[int], num_variables: int) -> int:
    """Satisfaction bitmap of one clause over all 2^n assignment masks.

    The clause only depends on its own variables, so the pattern is built
    at period ``2^(max variable)`` and then replicated to full width.
    """
    period = 1 << max(abs(lit) for lit in clause)
    local_universe = (1 << period) - 1
    pattern = 0
    for literal in clause:
        vmap = _variable_bitmap(abs(literal), period)
        pattern |= vmap if literal > 0 else (~vmap & local_universe)
    total = 1 << num_variables
    span = period
    while span < total:
        pattern |= pattern << span
        span *= 2
    return pattern


def _satisfying_bitmap(formula: CnfFormula) -> int:
    """Bitmap over all assignment masks, bit set iff the formula is satisfied.

    One sweep over the whole assignment space, done with word-parallel
    big-integer bit operations instead of a per-assignment loop.
    """
    n = formula.num_variables
    result = (1 << (1 << n)) - 1
    for clause in formula.clauses:
        result &= _clause_bitmap(clause, n)
    return result


def count_sat(formula: CnfFormula) -> int:
    """Exact number of satisfying total assignments."""
    _check_variable_budget(formula)
    return _satisfying_bitmap(formula).bit_count()


def suffix_satisfying_counts(formula: CnfFormula, k: int) -> list[int]:
    """For every assignment to ``x_1..x_k``: how many suffix assignments satisfy.

    Index into the result with the prefix's low-bit encoding
    ``sum(x_i << (i-1))``.  Summed over all prefixes this equals
    ``count_sat`` (one satisfying bitmap is bucketed, not 2^k sweeps).
    """
    _check_variable_budget(formula)
    n = formula.num_variables
    if not 0 <= k <= n:
        raise InputError(f"prefix length {k} out of range for {n} variables")
    bitmap = _satisfying_bitmap(formula)
    total = 1 << n
    stride_mask = 1  # bits at multiples of 2^k
    span = 1 << k
    while span < total:
        stride_mask |= stride_mask << span
        span *= 2
    counts = []
    for prefix_bits in range(1 << k):
        counts.append(((bitmap >> prefix_bits) & stride_mask).bit_count())
    return counts


def _prefix_tuples(k: int):
    """All 0/1 prefixes of length k in lexicographic order (x_1 first)."""
    for code in range(1 << k):
        yield tuple((code >> (k - 1 - i)) & 1 for i in range(k))


def _prefix_low_bits(prefix: Prefix) -> int:
    return sum(bit << i for i, bit in enumerate(prefix))


def e_minority_sat(formula: CnfFormula, k: int) -> tuple[bool, Prefix | None]:
    """Is there a prefix leaving at most half of the suffixes satisfying?

    Returns the verdict and the lexicographically least witness prefix
    (``None`` on a no-instance).
    """
    if not 1 <= k <= formula.num_variables:
        raise InputError(f"k={k} out of range, need 1 <= k <= {formula.num_variables}")
    counts = suffix_satisfying_counts(formula, k)
    n = formula.num_variables
    for prefix in _prefix_tuples(k):
        # "at most half of 2^(n-k)", written multiplicatively so k = n works
        if 2 * counts[_prefix_low_bits(prefix)] <= 1 << (n - k):
            return True, prefix
    return False, None


def e_exact_sat(
    formula: CnfFormula, k: int, ell: int, allow_zero: bool = False
) -> tuple[bool, Prefix | None]:
    """Is there a prefix leaving exactly ``ell`` suffixes satisfying?

    ``ell`` must be positive; ``allow_zero`` relaxes that for exploratory
    use only.
    """
    if not 1 <= k <= formula.num_variables:
        raise InputError(f"k={k} out of range, need 1 <= k <= {formula.num_variables}")
    if ell < 1 and not allow_zero:
        raise InputError("ell must be positive (pass allow_zero=True to permit 0)")
    if ell < 0:
        raise InputError("ell must be nonnegative")
    counts = suffix_satisfying_counts(formula, k)
    for prefix in _prefix_tuples(k):
        if counts[_prefix_low_bits(prefix)] == ell:
            return True, prefix
    return False, None


def count_subset_sum(sizes: list[int] | tuple[int, ...], target: int) -> int:
    """Exact number of index subsets of ``sizes`` summing to ``target``.

    The empty subset counts for target 0.  Meet-in-the-middle, refused
    beyond ``MAX_SUBSET_SUM_ITEMS`` items.
    """
    items = [int(s) for s in sizes]
    if any(s < 0 for s in items):
        raise InputError("sizes must be nonnegative")
    if len(items) > MAX_SUBSET_SUM_ITEMS:
        raise BudgetExceededError(
            f"subset-sum counter refuses {len(items)} items "
            f"(MAX_SUBSET_SUM_ITEMS={MAX_SUBSET_SUM_ITEMS})"
        )
    if target < 0:
        return 0
    half = (len(items) + 1) // 2
    left: Counter[int] = Counter([0])
    for w in items[:half]:
        left.update({s + w: c for s, c in left.items()})
    right: Counter[int] = Counter([0])
    for w in items[half:]:
        right.update({s + w: c for s, c in right.items()})
    small, large = (left, right) if len(left) <= len(right) else (right, left)
    return sum(c * large.get(target - v, 0) for v, c in small.items())
