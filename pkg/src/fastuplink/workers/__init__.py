from .pool import fan_out

__all__ = ["fan_out"]
