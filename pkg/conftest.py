# Keeps the repository root importable so tests resolve the helmguard package.
