"""Summarize detbound runs to users."""

from dataclasses import dataclass, field

from click import style
from typing_extensions import override

from .output import err, out

EXIT_FAILURE = 1
EXIT_INAPPLICABLE = 2


@dataclass
class Report:
    """Counts reports, hypothesis violations and failures. Render with `str(report)`."""

    quiet: bool = False
    verbose: bool = False
    done_count: int = 0
    violation_count: int = 0
    failure_count: int = 0
    violations: list[str] = field(default_factory=list)

    def done(self, what: str, summary: str = "") -> None:
        """Count an emitted report. Write out a message when verbose.

        Parameters
        ----------
        what : str
            Subcommand or claim that produced the report.
        summary : str
            One-line outcome. (Default value = "")
        """
        self.done_count += 1
        if self.verbose:
            out(f"{what}: {summary or 'done'}", bold=False)

    def violated(self, what: str, message: str) -> None:
        """Count a hypothesis violation or an inapplicable result.

        Parameters
        ----------
        what : str
            Subcommand or claim concerned.
        message : str
            The hypothesis that does not hold.
        """
        self.violation_count += 1
        self.violations.append(f"{what}: {message}")
        if not self.quiet:
            err(f"{what}: {message}", fg="yellow")

    def failed(self, what: str, message: str) -> None:
        """Count a failure. Write out a message.

        Parameters
        ----------
        what : str
            Subcommand or claim that failed.
        message : str
            Reason for the failure.
        """
        err(f"error: {what} failed: {message}")
        self.failure_count += 1

    def progress(self, done: int, total: int) -> None:
        """Search progress callback, verbose only."""
        if self.verbose:
            out(f"scanned partition {done}/{total}", bold=False)

    @property
    def return_code(self) -> int:
        """Return the exit code that the app should use.

        - if there were any failures, return 1;
        - if a hypothesis was violated or a claim was inapplicable, return 2;
        - otherwise return 0.

        Returns
        -------
        int
            return code.
        """
        if self.failure_count:
            return EXIT_FAILURE
        if self.violation_count:
            return EXIT_INAPPLICABLE
        return 0

    @override
    def __str__(self) -> str:
        """Render a color report of the current state.

        Use `click.unstyle` to remove colors.

        Returns
        -------
        str
            Pretty string representation of the report.
        """
        report: list[str] = []
        if self.done_count:
            s = "s" if self.done_count > 1 else ""
            report.append(style(f"{self.done_count} report{s} ", fg="blue") + "emitted")
        if self.violation_count:
            s = "s" if self.violation_count > 1 else ""
            report.append(
                style(f"{self.violation_count} hypothesis violation{s}", fg="yellow")
            )
        if self.failure_count:
            s = "s" if self.failure_count > 1 else ""
            report.append(style(f"{self.failure_count} failure{s}", fg="red"))
        if not report:
            return "nothing to report."
        return ", ".join(report) + "."
