"""Classification of chains of three-dimensional evolution algebras."""
