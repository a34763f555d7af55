"""Exact arithmetic and experiments for Drinfeld modules over F_q[t]."""
