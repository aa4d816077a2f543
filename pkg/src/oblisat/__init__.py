"""Obligation-accelerated LTL satisfiability checking."""

from oblisat.ltl import Formula, Lit, ParseError, Syntax, parse, parse_syntax, to_nnf, tag

__all__ = ["Formula", "Lit", "ParseError", "Syntax", "parse", "parse_syntax", "to_nnf", "tag"]
