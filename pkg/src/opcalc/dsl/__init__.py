from .evaluator import Evaluator, ScriptError, ScriptNameError, run_script
from .parser import ScriptSyntaxError, parse
from .report import Report, Section
from .syntax import pretty

__all__ = [
    "Evaluator", "Report", "ScriptError", "ScriptNameError", "ScriptSyntaxError", "Section",
    "parse", "pretty", "run_script",
]
