"""
Small algebras and form generators shared by the test modules.
"""

from typing import Optional

import sympy
from hypothesis import strategies as st

from holoquot.frame_algebra import Form, FrameAlgebra, basis_indices
from holoquot.residuals import Checker


def flat_algebra(dim: int, name: str = "flat") -> FrameAlgebra:
    """Abelian algebra with coframe e1..e{dim}."""
    return FrameAlgebra([f"e{i}" for i in range(1, dim + 1)], name=name).freeze()


def heisenberg() -> FrameAlgebra:
    """de3 = e1∧e2."""
    algebra = FrameAlgebra(["e1", "e2", "e3"], name="heisenberg")
    algebra.declare_structure("e3", algebra.e("e1", "e2"))
    return algebra.freeze()


def nilpotent_seven() -> FrameAlgebra:
    """de6 = e1∧e2, de7 = e1∧e3 on a 7-dimensional nilpotent algebra."""
    algebra = FrameAlgebra([f"e{i}" for i in range(1, 8)], name="nil7")
    algebra.declare_structure("e6", algebra.e("e1", "e2"))
    algebra.declare_structure("e7", algebra.e("e1", "e3"))
    return algebra.freeze()


def hyperbolic_plane() -> FrameAlgebra:
    """Upper half plane: e1 = dx/y, e2 = dy/y, so de1 = e1∧e2 and dy = y e2."""
    algebra = FrameAlgebra(["e1", "e2"], {"y": True}, name="hyperbolic")
    y = algebra.symbol("y")
    algebra.declare_structure("e1", algebra.e("e1", "e2"))
    algebra.declare_differential("y", algebra.form(1, {(1,): y}))
    return algebra.freeze()


def round_three_sphere() -> FrameAlgebra:
    """Left-invariant coframe of SU(2): de1 = e2∧e3 and cyclic."""
    algebra = FrameAlgebra(["e1", "e2", "e3"], name="su2")
    algebra.declare_structure("e1", algebra.e("e2", "e3"))
    algebra.declare_structure("e2", algebra.e("e3", "e1"))
    algebra.declare_structure("e3", algebra.e("e1", "e2"))
    return algebra.freeze()


def forms(algebra: FrameAlgebra, degree: int, max_terms: int = 6) -> st.SearchStrategy:
    """Forms with small integer coefficients on ``algebra``."""
    indices = basis_indices(algebra.dim, degree)
    return st.dictionaries(
        st.sampled_from(indices), st.integers(min_value=-3, max_value=3), max_size=max_terms
    ).map(lambda terms: algebra.form(degree, terms))


def vanishes(value, algebra: Optional[FrameAlgebra] = None, checker: Optional[Checker] = None) -> bool:
    """Exact-or-numeric vanishing with a small point budget."""
    checker = checker or Checker(mode="auto", tol=1e-9, points=5)
    return checker.vanishes(value, algebra)


def is_exactly_zero(form: Form) -> bool:
    return all(sympy.simplify(c) == 0 for c in form.coefficients())
