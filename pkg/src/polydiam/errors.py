"""Exception hierarchy shared by the library and the command line."""


class PolytopeError(Exception):
    """Base class for every error raised by polydiam."""


class ZeroRow(PolytopeError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"row {index} of A is (numerically) zero")


class SizeTooLarge(PolytopeError):
    def __init__(self, count, budget, what="subsets"):
        self.count = count
        self.budget = budget
        super().__init__(f"{count} {what} exceed the enumeration budget of {budget}")


class RankDeficient(PolytopeError, ValueError):
    pass


class SingularBasis(PolytopeError, ValueError):
    pass


class Degenerate(PolytopeError):
    """A vertex has more than ``n`` tight rows.

    ``point`` and ``tight_rows`` describe the first offending vertex;
    ``vertices`` lists every offending ``(point, tight_rows)`` pair.
    """

    def __init__(self, point, tight_rows, vertices=None):
        self.point = [float(x) + 0.0 for x in point]
        self.tight_rows = [int(i) for i in tight_rows]
        self.vertices = vertices or [(self.point, self.tight_rows)]
        super().__init__(
            f"degenerate vertex {self.point} has {len(self.tight_rows)} tight rows "
            f"{self.tight_rows}"
        )


class EmptyPolytope(PolytopeError):
    pass


class Unbounded(PolytopeError):
    def __init__(self, vertex_id, direction):
        self.vertex_id = int(vertex_id)
        self.direction = [float(x) for x in direction]
        super().__init__(
            f"ray from vertex {vertex_id} along {self.direction} is not blocked; "
            "the polyhedron is unbounded"
        )


class InconsistentAdjacency(PolytopeError):
    pass


class TooManyTies(PolytopeError):
    def __init__(self, ties, total):
        self.ties = ties
        self.total = total
        super().__init__(f"{ties} of {total} directions hit cone boundaries")


class EmptySet(PolytopeError, ValueError):
    pass


class PreconditionVolume(PolytopeError):
    def __init__(self, volume, half_ball, stderr):
        self.volume = volume
        self.half_ball = half_ball
        self.stderr = stderr
        super().__init__(
            f"cone volume {volume:.6g} (stderr {stderr:.3g}) exceeds half the ball "
            f"volume {half_ball:.6g}"
        )


class InvalidConditionNumbers(PolytopeError, ValueError):
    pass


class GenerationFailed(PolytopeError):
    pass


class ParseError(PolytopeError, ValueError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DimensionError(PolytopeError, ValueError):
    pass
