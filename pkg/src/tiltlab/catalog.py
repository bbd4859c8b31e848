"""Small stock algebras used by the demos and the test corpus."""

from __future__ import annotations

from .algebra import BoundQuiverAlgebra, build_algebra
from .linalg import DEFAULT_P


def linear_an(n: int, p: int = DEFAULT_P) -> BoundQuiverAlgebra:
    """Path algebra of the linear quiver 1 -> 2 -> ... -> n (hereditary)."""
    arrows = [(i, i, i + 1) for i in range(1, n)]
    return build_algebra(n, arrows, [], p=p)


def nakayama_rad_square_zero(n: int = 3, p: int = DEFAULT_P) -> BoundQuiverAlgebra:
    """Linear A_n quiver with all length-two paths killed (rad^2 = 0)."""
    arrows = [(i, i, i + 1) for i in range(1, n)]
    relations = [[i, i + 1] for i in range(1, n - 1)]
    return build_algebra(n, arrows, relations, p=p)
