"""Karp-Sipser peeling, special cycles and exact ranks of sparse random graphs."""
