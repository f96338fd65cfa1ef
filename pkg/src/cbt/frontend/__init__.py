"""Lexer, parser, elaborator, pretty-printer and command-line driver for ``.cbt`` files."""
