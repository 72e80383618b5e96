"""Pipeline modules for code search and corpus verification."""
