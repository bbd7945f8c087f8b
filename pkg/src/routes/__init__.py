# Routes package initialization
from .cli_routes import build_parser, main

__all__ = ['build_parser', 'main']
