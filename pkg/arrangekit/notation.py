# Copyright 2026 arrangekit contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Text notation for arrangements.

Grammar (whitespace between tokens is ignored):

    arrangement   := group+
    group         := '(' body ')' [ '_' multiplicity ]
    body          := item ( ',' item )*
    item          := species-token [ '_' positive-integer ]      # A_2 is A,A
    multiplicity  := positive-integer | 'inf'                    # 'inf' only in display mode
    species-token := letter (letter | digit)* [ ['^'] digits? ('+' | '-') ]

Examples: `(A)(B,C)`, `(A_3)`, `(A)_3`, `(Rb_2)(Rb)_3`, `(A^+)(e^-)`, `(A^2+)(e-)_2`.

Printing emits groups in canonical order (largest group first), contracts repeated species inside a group to `_k`
and repeated groups to a trailing `_m`. Parsing accepts any group and item order.

The grammar is a pyparsing expression. Species declarations, positive counts and `inf` are checked on the parse
results, so every error still points at the offending token.
"""

import logging
from collections import Counter
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import Enum
from typing import Any, NamedTuple

import pyparsing as pp

from arrangekit._common import ArrangeKitError
from arrangekit.core import SPECIES_TOKEN_PATTERN, Arrangement, Cluster, Composition, is_species_token

_LOG = logging.getLogger(__name__)

__all__ = [
    "INFINITY",
    "DisplayArrangement",
    "InfinityNotEnumerableError",
    "ParseError",
    "UnknownSpeciesError",
    "format_arrangement",
    "format_cluster",
    "format_display",
    "is_species_token",
    "parse",
    "parse_cluster",
    "parse_display",
]


class ParseError(ArrangeKitError, ValueError):
    def __init__(self, text: str, position: int, expected: str, found: str):
        self.text = text
        self.column = position
        # offsets are reported in UTF-8 bytes
        self.offset = len(text[:position].encode("utf-8"))
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {self.offset}: expected {expected}, found {found}")

    def render(self) -> str:
        """
        The input with a caret under the offending position.
        """
        return f"{self.text}\n{' ' * self.column}^\n{self}"


class UnknownSpeciesError(ParseError):
    pass


class InfinityNotEnumerableError(ParseError):
    pass


class _Infinity(Enum):
    INFINITY = "inf"

    def __str__(self) -> str:
        return self.value


INFINITY = _Infinity.INFINITY


# str.isspace() characters; pyparsing skips only ASCII blanks unless told otherwise
_WHITESPACE = (
    " \t\n\r\f\v\x1c\x1d\x1e\x1f\x85\xa0"
    + "".join(chr(c) for c in range(0x2000, 0x200B))
    + "".join(map(chr, (0x1680, 0x2028, 0x2029, 0x202F, 0x205F, 0x3000)))
)


class _Located(NamedTuple):
    value: Any
    loc: int


def _terminal(expr: pp.ParserElement, name: str, convert: Callable[[str], Any] | None = None) -> pp.ParserElement:
    expr = expr.set_whitespace_chars(_WHITESPACE).set_name(name)
    if convert is not None:
        expr = expr.set_parse_action(lambda s, loc, toks: _Located(convert(toks[0]), loc))
    return expr


_LPAREN = pp.Suppress(_terminal(pp.Literal("("), "'('"))
_RPAREN = pp.Suppress(_terminal(pp.Literal(")"), "',', '_' or ')'"))
_COMMA = pp.Suppress(_terminal(pp.Literal(","), "','"))
_UNDERSCORE = pp.Suppress(_terminal(pp.Literal("_"), "'_'"))
_INTEGER = _terminal(pp.Regex(r"[0-9]+"), "positive integer", int)
_SPECIES = _terminal(pp.Regex(SPECIES_TOKEN_PATTERN), "species", str)

_ITEM = pp.Group(_SPECIES + pp.Opt(_UNDERSCORE - _INTEGER))
_BODY = pp.Group(_ITEM + pp.ZeroOrMore(_COMMA - _ITEM))
_MULTIPLICITY = _terminal(
    pp.Regex(r"[0-9]+|inf(?![A-Za-z0-9])"),
    "positive integer or 'inf'",
    lambda token: INFINITY if token == "inf" else int(token),
)
_GROUP = pp.Group(_LPAREN - _BODY - _RPAREN + pp.Opt(_UNDERSCORE - _MULTIPLICITY))

_ARRANGEMENT = (pp.OneOrMore(_GROUP) + _terminal(pp.StringEnd(), "'(' or end of input")).parse_with_tabs()
_CLUSTER = (_LPAREN - _BODY - _RPAREN + _terminal(pp.StringEnd(), "end of input")).parse_with_tabs()


def _found(text: str, loc: int) -> str:
    return "end of input" if loc >= len(text) else f"'{text[loc]}'"


def _run(grammar: pp.ParserElement, text: str) -> pp.ParseResults:
    try:
        return grammar.parse_string(text)
    except pp.ParseBaseException as e:
        # enclosing elements may rewrite the message; the failing terminal keeps its name
        expected = e.parser_element.name if e.parser_element is not None else e.msg
        raise ParseError(text, e.loc, expected, _found(text, e.loc)) from None


def _positive(text: str, token: _Located) -> int:
    if token.value < 1:
        raise ParseError(text, token.loc, "positive integer", _found(text, token.loc))
    return token.value


def _build_cluster(text: str, body: pp.ParseResults, declared: frozenset[str] | None) -> Cluster:
    items = []
    for species, *count in body:
        if declared is not None and species.value not in declared:
            names = ", ".join(sorted(declared))
            raise UnknownSpeciesError(text, species.loc, f"declared species ({names})", f"'{species.value}'")
        items.append((species.value, _positive(text, count[0]) if count else 1))
    return Cluster(Composition(tuple(items)))


def _build_groups(
    text: str, results: pp.ParseResults, declared: frozenset[str] | None, allow_infinity: bool
) -> list[tuple[Cluster, int | _Infinity]]:
    groups = []
    for body, *suffix in results:
        cluster = _build_cluster(text, body, declared)
        multiplicity: int | _Infinity = 1
        if suffix:
            token = suffix[0]
            if token.value is INFINITY:
                if not allow_infinity:
                    raise InfinityNotEnumerableError(
                        text, token.loc, "finite group multiplicity ('inf' is display-only)", "'inf'"
                    )
                multiplicity = INFINITY
            else:
                multiplicity = _positive(text, token)
        groups.append((cluster, multiplicity))
    return groups


def _declared_names(system) -> frozenset[str] | None:
    if system is None:
        return None
    if hasattr(system, "species_names"):
        return frozenset(system.species_names)
    return frozenset(system)


def parse(text: str, system=None) -> Arrangement:
    """
    Parse an arrangement, e.g. `(A)(B,C)` or `(Rb_2)(Rb)_3`.

    Args:
        text: Arrangement in text notation.
        system: A `SystemSpec` (or any collection of species names) declaring the allowed species tokens. If None,
            every well-formed species token is accepted.

    Returns:
        The canonical arrangement; its composition is derived from the text.

    Raises:
        ParseError: on a grammar violation.
        UnknownSpeciesError: if a species token is not declared by `system`.
        InfinityNotEnumerableError: for an `_inf` group multiplicity.
    """
    groups = _build_groups(text, _run(_ARRANGEMENT, text), _declared_names(system), allow_infinity=False)
    items = [(name, count * m) for cluster, m in groups for name, count in cluster.members.items()]
    return Arrangement(tuple(groups), Composition(tuple(items)))


def parse_cluster(text: str, system=None) -> Cluster:
    """
    Parse exactly one group without group multiplicity, e.g. `(X,e_2)`.
    """
    body = _run(_CLUSTER, text)[0]
    return _build_cluster(text, body, _declared_names(system))


def format_cluster(cluster: Cluster) -> str:
    return f"({cluster.members.body()})"


def format_arrangement(arrangement: Arrangement) -> str:
    """
    Canonical text of an arrangement, e.g. `(A_2)(A)` or `(A)_3`.
    """
    return "".join(
        format_cluster(cluster) + (f"_{multiplicity}" if multiplicity > 1 else "")
        for cluster, multiplicity in arrangement.groups
    )


@dataclass(frozen=True)
class DisplayArrangement:
    """
    An arrangement as written for display, possibly with an infinite group multiplicity such as `(Rb_2)(Rb)_inf`.
    Not enumerable; it has no finite composition.
    """

    groups: tuple[tuple[Cluster, int | _Infinity], ...]

    @property
    def is_finite(self) -> bool:
        return all(multiplicity is not INFINITY for _, multiplicity in self.groups)

    def to_arrangement(self) -> Arrangement:
        if not self.is_finite:
            raise ValueError("an arrangement with an infinite group multiplicity has no finite composition")
        composition = Composition(
            tuple((n, c * m) for cluster, m in self.groups for n, c in cluster.members.items())
        )
        return Arrangement(self.groups, composition)

    def __str__(self) -> str:
        return format_display(self)


def _merge_display_groups(
    groups: Iterable[tuple[Cluster, int | _Infinity]],
) -> tuple[tuple[Cluster, int | _Infinity], ...]:
    finite: Counter[Cluster] = Counter()
    infinite: set[Cluster] = set()
    for cluster, multiplicity in groups:
        if multiplicity is INFINITY:
            infinite.add(cluster)
        else:
            finite[cluster] += multiplicity
    merged = {cluster: INFINITY for cluster in infinite}
    merged.update({cluster: m for cluster, m in finite.items() if cluster not in infinite})
    return tuple(sorted(merged.items(), key=lambda group: group[0].key))


def parse_display(text: str, system=None) -> DisplayArrangement:
    """
    Parse display notation, which additionally accepts `_inf` group multiplicities.
    """
    groups = _build_groups(text, _run(_ARRANGEMENT, text), _declared_names(system), allow_infinity=True)
    return DisplayArrangement(_merge_display_groups(groups))


def format_display(display: DisplayArrangement) -> str:
    return "".join(
        format_cluster(cluster) + ("" if multiplicity == 1 else f"_{multiplicity}")
        for cluster, multiplicity in display.groups
    )
