"""Exception types raised across the package."""


class DposetError(Exception):
    """Base class for every error raised by dposet."""


# digraph core
class TooLarge(DposetError):
    pass


class EmptySubset(DposetError):
    pass


class NoDeletion(DposetError):
    pass


class BadSize(DposetError):
    pass


class BadGraph(DposetError):
    """Malformed adjacency data or DGF text."""


# families
class BadCircle(DposetError):
    pass


class NotLoopFull(DposetError):
    pass


class NotLoopFree(DposetError):
    pass


class EqualSizes(DposetError):
    pass


class BadSpec(DposetError):
    pass


# catalog
class CacheError(DposetError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line


# logic
class FormulaSyntaxError(DposetError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownConstant(DposetError):
    pass


class UnboundVariable(DposetError):
    pass


class BadArity(DposetError):
    pass


# automorphisms
class BadPermutation(DposetError):
    pass


# lemma verifier
class UnknownLemma(DposetError):
    pass


class BadParams(DposetError):
    pass


class BadSubset(DposetError):
    pass
