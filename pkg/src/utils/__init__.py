"""Configuration, console output, sweep task tracking and artefact workspaces."""
