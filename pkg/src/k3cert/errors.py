"""Exception hierarchy shared by all modules.

ValidationError maps to CLI exit code 1 (bad input), ComputationError to
exit code 2 (search or step budget exhausted).
"""


class K3CertError(Exception):
    pass


class ValidationError(K3CertError):
    pass


class ComputationError(K3CertError):
    pass


class LegendreExclusion(ValidationError):
    """n has the shape 4^a * (8b + 7), so it is not a sum of three squares."""

    def __init__(self, n, a, b):
        super().__init__(f"Legendre exclusion: {n} = 4^{a} * (8*{b} + 7)")
        self.n = n
        self.witness = (a, b)
