"""Minimum generating sets of finite Boolean lattices and what they are good for.

* ``boolgen.lattice``   B_n as bit vectors, ``sp`` and ``lasp``
* ``boolgen.genset``    generating-set tests, minimum constructions, sampling
* ``boolgen.terms``     lattice terms, wire syntax, random terms
* ``boolgen.protocol``  session-key exchange with a lattice master key
* ``boolgen.reduction`` 3-colorability as lattice equations
"""

from .errors import (
    BoolgenError,
    CapacityError,
    ContractError,
    DimensionError,
    DomainError,
    GenerationError,
    ProtocolError,
    TermSyntaxError,
    UnsupportedWidthError,
)
from .genset import (
    GeneratingVector,
    SampleReport,
    closure_oracle,
    construct_genset,
    is_generating,
    min_genset_size_bruteforce,
    sample_generating_vectors,
)
from .lattice import LatticeElement, atoms, bottom, join, lasp, leq, meet, sp, top
from .terms import Join, Meet, TermVector, Var, eval_vector, evaluate, format_term, parse_term, random_term_vector

__version__ = "0.1.0"
