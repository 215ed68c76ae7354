# Shared Utilities
