"""UI Controller for singular-kernels using the Rich library."""

from typing import Any, Dict, List, Optional, Sequence, Tuple

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, Progress, TaskID, TextColumn
from rich.table import Table
from rich.text import Text
from rich.theme import Theme

from .models import EvalResult, VerificationReport

STATUS_STYLES = {"PASS": "pass", "FAIL": "fail", "INFO": "info"}


def format_number(value: Any) -> str:
    """Full-precision repr for floats, str for everything else."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class UIController:
    """Controller for Rich-based output of values, tables and reports."""

    def __init__(self, console: Optional[Console] = None):
        """Initialize UIController with Rich console and theme.

        Args:
            console: Optional Rich console instance. If None, creates a new one.
        """
        custom_theme = Theme(
            {
                "info": "cyan",
                "warning": "yellow",
                "error": "bold red",
                "success": "bold green",
                "value": "bold white",
                "method": "magenta",
                "pass": "bold green",
                "fail": "bold red",
                "muted": "dim white",
            }
        )

        if console is None:
            console = Console(theme=custom_theme)
        else:
            console.push_theme(custom_theme)
        self.console = console
        self._progress: Optional[Progress] = None
        self._task: Optional[TaskID] = None

    def _panel(self, message: str, title: str, style: str) -> None:
        self.console.print(
            Panel(
                Text(message, style=style),
                title=f"[{style}]{title}[/{style}]",
                border_style=style,
                box=box.ROUNDED,
            )
        )

    def display_error(self, message: str, title: str = "Error") -> None:
        """Display an error message in a red panel."""
        self._panel(message, title, "error")

    def display_warning(self, message: str, title: str = "Warning") -> None:
        self._panel(message, title, "warning")

    def display_success(self, message: str, title: str = "Success") -> None:
        self._panel(message, title, "success")

    def start_progress(self, description: str, total: Optional[int] = None) -> None:
        """Start a transient progress bar.

        Args:
            description: Text shown next to the bar
            total: Number of steps, or None for an open-ended task
        """
        if self._progress is None:
            self._progress = Progress(
                TextColumn("[progress.description]{task.description}"),
                BarColumn(),
                TextColumn("{task.completed}/{task.total}"),
                console=self.console,
                transient=True,
            )
            self._progress.start()
        self._task = self._progress.add_task(description=description, total=total)

    def advance_progress(self, steps: int = 1) -> None:
        if self._progress is not None and self._task is not None:
            self._progress.advance(self._task, steps)

    def stop_progress(self) -> None:
        """Stop the progress bar."""
        if self._progress is not None:
            self._progress.stop()
            self._progress = None
            self._task = None

    def print(self, *args: Any, **kwargs: Any) -> None:
        self.console.print(*args, **kwargs)

    def display_eval_result(
        self,
        title: str,
        result: EvalResult,
        extra: Optional[Sequence[Tuple[str, Any]]] = None,
    ) -> None:
        """Show one series evaluation: value first, diagnostics below it."""
        table = Table(show_header=False, box=box.SIMPLE, padding=(0, 1))
        table.add_column("Field", style="info")
        table.add_column("Value")
        table.add_row("value", f"[value]{format_number(result.value)}[/value]")
        table.add_row("error estimate", format_number(result.error_estimate))
        table.add_row("terms used", str(result.terms_used))
        if result.method:
            table.add_row("method", f"[method]{result.method}[/method]")
        converged = "yes" if result.converged else "[warning]no (truncated)[/warning]"
        table.add_row("converged", converged)
        for key, value in extra or ():
            table.add_row(key, format_number(value))

        self.console.print(
            Panel(
                table,
                title=f"[info]{title}[/info]",
                border_style="info",
                box=box.ROUNDED,
            )
        )

    def display_comparison(
        self, results: Dict[str, EvalResult], differences: Dict[str, float]
    ) -> None:
        """Values of every method followed by their pairwise relative differences."""
        table = Table(
            title="F_A by method",
            show_header=True,
            header_style="bold blue",
            box=box.ROUNDED,
        )
        table.add_column("Method", style="method")
        table.add_column("Value", justify="right")
        table.add_column("Terms", justify="right")
        table.add_column("Converged", justify="center")
        for method, result in results.items():
            table.add_row(
                method,
                format_number(result.value),
                str(result.terms_used),
                "yes" if result.converged else "[warning]no[/warning]",
            )
        self.console.print(table)

        agreement = Table(
            title="Agreement",
            show_header=True,
            header_style="bold blue",
            box=box.ROUNDED,
        )
        agreement.add_column("Pair", style="method")
        agreement.add_column("Relative difference", justify="right")
        for pair, difference in differences.items():
            agreement.add_row(pair, f"{difference:.3e}")
        self.console.print(agreement)

    def display_report(self, report: VerificationReport) -> None:
        """One row per check with its status, observed value and threshold."""
        table = Table(
            title=f"Verification: {report.suite}",
            show_header=True,
            header_style="bold blue",
            box=box.ROUNDED,
        )
        table.add_column("Check", style="info")
        table.add_column("Observed", justify="right")
        table.add_column("Threshold", justify="right")
        table.add_column("Status", justify="center")
        for check in report.checks:
            style = STATUS_STYLES[check.status]
            threshold = "" if check.threshold is None else f"{check.threshold:.1e}"
            table.add_row(
                check.name,
                f"{check.observed:.3e}",
                threshold,
                f"[{style}]{check.status}[/{style}]",
            )
        self.console.print(table)

    def display_report_summary(self, reports: List[VerificationReport]) -> None:
        """Compact pass/fail line across several suites."""
        total = sum(len(r.checks) for r in reports)
        failures = sum(len(r.failures) for r in reports)
        informational = sum(
            1 for r in reports for check in r.checks if check.passed is None
        )
        summary_lines = [
            f"Checks: [info]{total}[/info]",
            f"Failed: [{'fail' if failures else 'pass'}]{failures}[/]",
            f"Reported only: [muted]{informational}[/muted]",
        ]
        self.console.print(
            Panel(
                " | ".join(summary_lines),
                title="[info]Summary[/info]",
                border_style="dim",
                box=box.MINIMAL,
                padding=(0, 1),
            )
        )
