"""Division algebra, measures, and the Sato-Tate and Lang-Trotter statistics."""
