"""Top-cell model shapes, meshes and report schemas."""
