from typing import Optional


class CriticalIdealsException(Exception):
    def __init__(self, error):
        self.error = error
        self.message = str(error)
        super().__init__(self.message)


class DigraphError(CriticalIdealsException):
    pass


class Digraph6ParseError(DigraphError):
    def __init__(self, error, offset: int):
        self.reason = error
        self.offset = offset
        super().__init__(f"{error} (byte offset {offset})")

    def __reduce__(self):
        return (type(self), (self.reason, self.offset))


class CapabilityError(CriticalIdealsException):
    pass


class PolynomialError(CriticalIdealsException):
    pass


class ResourceLimitError(CriticalIdealsException):
    def __init__(
        self,
        error,
        steps: int,
        basis_size: int,
        digraph6: Optional[str] = None,
    ):
        self.steps = steps
        self.basis_size = basis_size
        self.digraph6 = digraph6
        super().__init__(error)

    def __reduce__(self):
        return (type(self), (self.error, self.steps, self.basis_size, self.digraph6))

    def for_digraph(self, digraph6: str) -> "ResourceLimitError":
        """Re-issue the error naming the digraph being processed

        Args:
            digraph6 (str): digraph6 string of the offending digraph

        Returns:
            ResourceLimitError: error carrying the digraph6 string
        """
        return ResourceLimitError(
            f"{self.message} while processing {digraph6}",
            steps=self.steps,
            basis_size=self.basis_size,
            digraph6=digraph6,
        )


class LambdaError(CriticalIdealsException):
    pass


class MatrixError(CriticalIdealsException):
    pass
