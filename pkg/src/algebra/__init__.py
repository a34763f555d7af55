"""Finite fields, F_q[t], pi-adic series, skew polynomials and linear algebra over F_q."""
