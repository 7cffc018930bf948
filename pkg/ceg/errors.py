# ceg/errors.py

from typing import List, Sequence


class CegError(Exception):
    """Base class for every error raised by the ceg package."""


# Tree structure


class TreeStructureError(CegError):
    pass


class CycleDetected(TreeStructureError):
    pass


class MultipleRoots(TreeStructureError):
    pass


class MultipleParents(TreeStructureError):
    pass


class DuplicateSiblingLabel(TreeStructureError):
    pass


class Disconnected(TreeStructureError):
    pass


class EmptyTree(TreeStructureError):
    pass


class InvalidParameter(TreeStructureError):
    """An edge count or theta outside its admissible range."""


class IsLeaf(CegError):
    pass


# Staging


class StagingError(CegError):
    pass


class UnknownVertex(StagingError):
    pass


class LeafInStage(StagingError):
    pass


class ZeroCountSituation(StagingError):
    pass


class InvalidPartition(StagingError):
    def __init__(self, violations: Sequence[object]):
        self.violations: List[object] = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} violation(s): {lines}")


# Reconstruction


class ReconstructionError(CegError):
    pass


class PrefixMissing(ReconstructionError):
    pass


class ColourConflict(ReconstructionError):
    pass


class TooLarge(CegError):
    pass


# Ingest


class IngestError(CegError):
    pass


class EmptyTable(IngestError):
    pass


class UnknownColumn(IngestError):
    pass


class InconsistentTermination(IngestError):
    """A row stops at a vertex that other rows continue through."""


class PrefixNotFound(CegError):
    pass


class FormatError(CegError):
    pass
