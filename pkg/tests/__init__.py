# Cross-app integration tests for heislab: CLI exit codes, determinism, API
