"""Typed errors for the trainer."""


class TrainerError(Exception):
    """Base class for trainer failures."""


class ConfigError(TrainerError):
    """Bad hyperparameters, dataset/config mismatch, or missing inputs."""


class DataError(TrainerError):
    """Malformed training data or geometry mismatch between channels."""
