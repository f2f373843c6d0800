"""Exp-log normalization of intuitionistic formulas, the G4ip and HS sequent
calculi, and the arithmetic measure that makes their proof search terminate."""

__version__ = "0.1.0"
