"""Command-line surface: ``bmpoisson <command>``."""
