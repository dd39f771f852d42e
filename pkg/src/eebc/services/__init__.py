"""Services shared by the CLI workflows."""
