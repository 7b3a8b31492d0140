"""Shared exception types."""


class ConfigError(ValueError):
    """A scenario, agent, or experiment configuration value is unusable."""


class EpisodeFinished(RuntimeError):
    """Raised when stepping an environment state past the episode horizon."""
