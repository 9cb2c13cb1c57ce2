"""Exact computational toolkit for noncommutative cluster structures on
bipartite ribbon graphs: spectral surfaces, flag/line-bundle dictionaries,
A- and X-mutations, the cyclic 2-form, loop brackets, and dimer Hamiltonians.
"""

from . import scalar  # noqa: F401
