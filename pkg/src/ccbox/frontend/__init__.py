from .diagnostics import Diagnostic, ParseError, Severity, Span, TYPING_CODES
from .parser import SourceProgram, parse, parse_type
from .printer import pretty, show_state, show_term, show_type
