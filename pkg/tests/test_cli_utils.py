"""Tests for CLI parsing, exit codes, file writes and logging setup."""

import io
import logging
from fractions import Fraction

import pytest
from pydantic import ValidationError
from rich.console import Console

from dirilab.cli.utils.errors import (
    EXIT_FINDINGS,
    EXIT_INTERNAL_ERROR,
    EXIT_INTERRUPTED,
    EXIT_USAGE_ERROR,
    ConfigurationError,
    FindingsError,
    UsageError,
    exit_code_for,
    handle_error,
)
from dirilab.cli.utils.fs import safe_read, safe_write
from dirilab.cli.utils.progress import SweepProgress
from dirilab.cli.utils.validation import (
    parse_int_list,
    parse_number,
    parse_rational,
    parse_word,
    validate_output_directory,
)
from dirilab.src.engine.classification import PsiSpec
from dirilab.src.engine.errors import DomainError
from dirilab.src.engine.logging_config import setup_module_logging


class TestParsing:
    def test_rationals(self):
        assert parse_rational("5/8") == Fraction(5, 8)
        assert parse_rational(" 3 ") == Fraction(3)
        with pytest.raises(UsageError):
            parse_rational("1/0")
        with pytest.raises(UsageError):
            parse_rational("0.5")

    def test_numbers_accept_decimals(self):
        assert parse_number("0.5") == Fraction(1, 2)
        assert parse_number("2/3") == Fraction(2, 3)
        with pytest.raises(UsageError):
            parse_number("half")

    def test_int_lists(self):
        assert parse_int_list("2..5") == [2, 3, 4, 5]
        assert parse_int_list("5,10,25") == [5, 10, 25]
        assert parse_int_list("7") == [7]
        with pytest.raises(UsageError):
            parse_int_list("5..2")
        with pytest.raises(UsageError):
            parse_int_list("a,b")

    def test_words(self):
        assert parse_word("[1,2,3]") == (1, 2, 3)
        assert parse_word("4, 5") == (4, 5)
        assert parse_word("[]") == ()

    def test_output_directory_must_not_be_a_file(self, tmp_path):
        path = tmp_path / "file.txt"
        path.write_text("x")
        with pytest.raises(ConfigurationError):
            validate_output_directory(str(path))
        assert validate_output_directory(str(tmp_path / "new")) == (tmp_path / "new").resolve()


class TestExitCodes:
    def test_mapping(self):
        assert exit_code_for(FindingsError("2 findings", count=2)) == EXIT_FINDINGS
        assert exit_code_for(ConfigurationError("bad")) == EXIT_USAGE_ERROR
        assert exit_code_for(DomainError("x outside [0, 1)")) == EXIT_USAGE_ERROR
        assert exit_code_for(KeyboardInterrupt()) == EXIT_INTERRUPTED
        assert exit_code_for(RuntimeError("boom")) == EXIT_INTERNAL_ERROR

    def test_validation_errors_are_usage_errors(self):
        with pytest.raises(ValidationError) as exc_info:
            PsiSpec.power(-1)
        assert exit_code_for(exc_info.value) == EXIT_USAGE_ERROR

    def test_handle_error_reports_on_stderr(self, capsys):
        assert handle_error(UsageError("bad flag")) == EXIT_USAGE_ERROR
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "bad flag" in captured.err


class TestFiles:
    def test_safe_write_creates_parents(self, tmp_path):
        path = safe_write(tmp_path / "a" / "b" / "out.csv", "x,y\n1,2\n")
        assert safe_read(path) == "x,y\n1,2\n"
        assert not path.with_suffix(".csv.tmp").exists()


class TestProgress:
    def test_inactive_without_a_terminal(self):
        console = Console(file=io.StringIO())
        with SweepProgress(total=3, description="sweep", console=console) as progress:
            progress.advance("step")
            progress.advance()
        assert not progress.active
        assert progress.completed == 2


class TestLogging:
    def test_module_logger_is_colored_and_isolated(self):
        stream = io.StringIO()
        logger = setup_module_logging("dirilab.tests.sample", logging.INFO, stream)
        logger.info("solved S")
        logger.debug("hidden")
        assert len(logger.handlers) == 1
        assert not logger.propagate
        output = stream.getvalue()
        assert "solved S" in output
        assert "INFO" in output
        assert "hidden" not in output
