"""Exception hierarchy shared by every module.

Domain and validation problems derive from :class:`CylDomError`; problems with
files on disk derive from :class:`DataFileError` so the CLI can map them to a
different exit status.
"""


class CylDomError(Exception):
    """Base class for all package errors."""


class BoundsError(CylDomError, ValueError):
    """A size parameter is outside the supported range."""


class DimensionError(CylDomError, ValueError):
    """Operands have incompatible shapes."""


class RelationError(CylDomError, ValueError):
    """An arc quantity was requested for a pair that is not an arc."""


class TropicalOverflowError(CylDomError, OverflowError):
    """A finite tropical sum reached the infinity sentinel."""


class PartitionError(CylDomError, ValueError):
    """The cylinder is too short for two disjoint border strips."""


class ConstructionError(CylDomError, RuntimeError):
    """A constructed vertex set failed verification."""


class EncodingError(CylDomError, ValueError):
    """A vertex set or word list cannot be translated to the other form."""


class DataFileError(CylDomError):
    """A file on disk is malformed or cannot be used."""


class FormatError(DataFileError):
    """Bad magic, version, truncated payload or checksum mismatch."""


class ResumeError(DataFileError):
    """A checkpoint directory cannot be resumed from."""
