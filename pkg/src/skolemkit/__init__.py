"""Symbolic asymptotics for Skolem functions and CNF ordinal arithmetic."""
