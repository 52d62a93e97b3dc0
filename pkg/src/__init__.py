"""acyclic-thinning: homology-preserving thinning with acyclicity tables."""
