from .commands import CommandRouter, router

__all__ = ["CommandRouter", "router"]
