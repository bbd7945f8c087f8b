# Services package initialization
from .numtheory import DomainError
from .counting_service import Evaluation, FormulaInvariantError, PreconditionError, Term
from .oracle_service import OracleError, enumerate_count, enumerate_profile, enumerate_witnesses
from .evaluation_service import build_request, evaluate, oracle_query
from .check_service import CheckError, check_cases, run_check
from .table_service import TableError, build_rows, render_table
from .bench_service import run_bench

__all__ = [
    'DomainError',
    'PreconditionError',
    'FormulaInvariantError',
    'OracleError',
    'CheckError',
    'TableError',
    'Evaluation',
    'Term',
    'enumerate_count',
    'enumerate_profile',
    'enumerate_witnesses',
    'build_request',
    'evaluate',
    'oracle_query',
    'check_cases',
    'run_check',
    'build_rows',
    'render_table',
    'run_bench',
]
