"""Mechanical checking of bivector-algebra derivations written as ``.bvd`` scripts."""

from .checker import Binding, CheckReport, Result, Witness, battery, check_script, check_statement, check_text, evaluate
from .lexer import Kind, LexError, ScriptError, Token, tokenize
from .nodes import Add, Basis, Const, Expr, LambdaBasis, LambdaSym, Mul, Neg, Statement, VecA, VecB, to_text
from .parser import ParseError, parse, parse_expr, parse_statement
