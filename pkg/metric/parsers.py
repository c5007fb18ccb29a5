"""Text formats for distance matrices and weighted trees."""

from enum import Enum
import re
from typing import Optional, Union

from errors import MetricParseError, TreeStructureError
from logging_config import get_logger
from metric.space import FiniteMetricSpace, validate_metric
from metric.trees import TreeEdge, WeightedTree
from metric.values import Distance, DistanceMode

logger = get_logger(__name__)

_TOKEN = re.compile(r"[^,\s]+")


class MatrixFormat(str, Enum):
    LOWER = "lower"
    SQUARE = "square"


def _decode(text: Union[bytes, str]) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MetricParseError(f"input is not UTF-8: {exc.reason}", 1, 1) from exc
    return text


def _content_lines(text: str) -> list[tuple[int, str]]:
    """Non-blank lines with their 1-based numbers; '#' starts a comment."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            lines.append((number, line))
    return lines


def _parse_row(line_no: int, line: str, mode: DistanceMode) -> list[Distance]:
    values = []
    for match in _TOKEN.finditer(line):
        try:
            values.append(mode.parse(match.group()))
        except (ValueError, ZeroDivisionError):
            raise MetricParseError(f"not a number: '{match.group()}'", line_no, match.start() + 1) from None
    return values


def load_metric(
    text: Union[bytes, str],
    fmt: Union[MatrixFormat, str] = MatrixFormat.LOWER,
    mode: Optional[DistanceMode] = None,
    allow_pseudo: bool = False,
    names: Optional[list[str]] = None,
) -> FiniteMetricSpace:
    """Parse and validate a distance matrix.

    Lower-triangular input: row i (starting at the second point) holds the i
    distances d(p_i, p_0), ..., d(p_i, p_{i-1}); empty input is a one-point
    space. Square input: n rows of n values.

    Args:
        text: Matrix text (bytes are decoded as UTF-8)
        fmt: "lower" or "square"
        mode: Numeric mode, rational by default
        allow_pseudo: Collapse zero-distance duplicates instead of failing
        names: Optional point labels, default "0".."n-1"

    Returns:
        Validated FiniteMetricSpace

    Raises:
        MetricParseError: With the line and column of the offending token
        MetricAxiomError: Naming the points that violate an axiom
    """
    mode = mode or DistanceMode.rational()
    fmt = MatrixFormat(fmt)
    lines = [(no, line) for no, line in _content_lines(_decode(text)) if _TOKEN.search(line)]
    rows = [(line_no, _parse_row(line_no, line, mode)) for line_no, line in lines]

    if fmt is MatrixFormat.LOWER:
        n = len(rows) + 1
        matrix = [[mode.zero] * n for _ in range(n)]
        for i, (line_no, values) in enumerate(rows, start=1):
            if len(values) != i:
                column = _column_after(lines[i - 1][1], min(len(values), i))
                raise MetricParseError(f"row {i} needs {i} values, found {len(values)}", line_no, column)
            for j, value in enumerate(values):
                matrix[i][j] = value
                matrix[j][i] = value
    else:
        if not rows:
            raise MetricParseError("square matrix is empty", 1, 1)
        n = len(rows)
        for line_no, values in rows:
            if len(values) != n:
                raise MetricParseError(
                    f"square matrix row needs {n} values, found {len(values)}",
                    line_no,
                    _column_after(dict(lines)[line_no], min(len(values), n)),
                )
        matrix = [values for _, values in rows]

    if names is not None and len(names) != n:
        raise MetricParseError(f"{len(names)} names given for {n} points", 1, 1)
    labels = tuple(names) if names is not None else tuple(str(i) for i in range(n))
    logger.debug(f"Parsed {fmt.value} matrix with {n} points in {mode.kind.value} mode")
    space = FiniteMetricSpace(labels, tuple(tuple(row) for row in matrix), mode)
    return validate_metric(space, allow_pseudo=allow_pseudo)


def _column_after(line: str, count: int) -> int:
    """1-based column just past the first `count` tokens (where a problem starts)."""
    matches = list(_TOKEN.finditer(line))
    if count < len(matches):
        return matches[count].start() + 1
    return len(line.rstrip()) + 1


def load_tree(text: Union[bytes, str], mode: Optional[DistanceMode] = None) -> WeightedTree:
    """Parse a weighted tree: one "name_u name_v length" edge per line.

    An optional first line "root name_r" fixes the root. Vertex indices follow
    the order in which names first appear.
    """
    mode = mode or DistanceMode.rational()
    names: list[str] = []
    index: dict[str, int] = {}
    edges: list[TreeEdge] = []
    root_name: Optional[str] = None
    root_line = 0

    def vertex(name: str) -> int:
        if name not in index:
            index[name] = len(names)
            names.append(name)
        return index[name]

    for position, (line_no, line) in enumerate(_content_lines(_decode(text))):
        tokens = list(_TOKEN.finditer(line))
        if not tokens:
            continue
        if tokens[0].group() == "root":
            if position != 0 or len(tokens) != 2:
                raise MetricParseError("'root name' is only allowed as the first line", line_no, tokens[0].start() + 1)
            root_name, root_line = tokens[1].group(), line_no
            continue
        if len(tokens) != 3:
            raise MetricParseError(
                f"expected 'name_u name_v length', found {len(tokens)} fields",
                line_no,
                tokens[min(len(tokens), 3) - 1].start() + 1,
            )
        try:
            length = mode.parse(tokens[2].group())
        except (ValueError, ZeroDivisionError):
            raise MetricParseError(f"not a number: '{tokens[2].group()}'", line_no, tokens[2].start() + 1) from None
        edges.append(TreeEdge(vertex(tokens[0].group()), vertex(tokens[1].group()), length))

    if root_name is not None:
        if root_name not in index and not edges:
            vertex(root_name)
        if root_name not in index:
            raise MetricParseError(f"root '{root_name}' is not a vertex", root_line, 6)
    if not names:
        raise TreeStructureError("tree file has no vertices")
    root = index[root_name] if root_name is not None else None
    logger.debug(f"Parsed tree with {len(names)} vertices and {len(edges)} edges")
    return WeightedTree(tuple(names), tuple(edges), mode, root)
