"""Drinfeld modules, Frobenius charpolys, torsion and the Carlitz module."""
