"""Exception types shared by every module."""


class FreeActsError(Exception):
    pass


class InvalidMonoid(FreeActsError, ValueError):
    pass


class NotAssociative(InvalidMonoid):
    def __init__(self, a, b, c):
        self.witness = (a, b, c)
        super().__init__(f"(ab)c != a(bc) for a={a}, b={b}, c={c}")


class BadIdentity(InvalidMonoid):
    def __init__(self, x):
        self.witness = x
        super().__init__(f"identity law fails at element {x}")


class IndexOutOfRange(InvalidMonoid):
    def __init__(self, row, col, value, order):
        self.witness = (row, col, value)
        super().__init__(f"table[{row}][{col}] = {value} is outside [0, {order})")


class RankMismatch(FreeActsError, ValueError):
    pass


class TooLarge(FreeActsError):
    """A search or materialization would exceed its configured budget."""


class Timeout(FreeActsError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotFunctorial(FreeActsError):
    pass


class NotTranslationClosed(FreeActsError):
    pass
