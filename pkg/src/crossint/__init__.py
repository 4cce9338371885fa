"""Exact tools for cross-intersecting uniform set families.

Constructions (stars, the size-extremal intersecting families, the
two-family product examples), exact big-integer certification of the
binomial inequalities behind the product bound, and exhaustive or
budgeted search for the maximum of |F|*|G| over non-trivial
cross-intersecting pairs at small scale.
"""

__version__ = "0.1.0"
