from ._qpk import QpkError, distance, filters, run

__all__ = ["QpkError", "distance", "filters", "run"]
