"""A small HTML document model with a CSS-selector subset.

Portal result pages only need tag/class/id selection with descendant and
child combinators, so this stays on the standard-library `html.parser`
instead of pulling in a full parser stack.  Selectors understand:

    tag        .cls        #ident        tag.cls#ident
    ancestor descendant    parent > child

Anything fancier raises `RuleCompileError` up front, at rule-compile time
rather than mid-extraction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterator, Optional, Union

from .errors import RuleCompileError

# Elements that never take content and never appear on the open stack.
_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}


@dataclass
class Element:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list[Union["Element", str]] = field(default_factory=list)
    parent: Optional["Element"] = None

    def classes(self) -> set[str]:
        return set(self.attrs.get("class", "").split())

    def get_text(self) -> str:
        """All descendant text, concatenated in document order."""
        parts: list[str] = []
        for child in self.children:
            if isinstance(child, str):
                parts.append(child)
            else:
                parts.append(child.get_text())
        return "".join(parts)

    def iter_elements(self) -> Iterator["Element"]:
        """This element and every descendant element, in document order."""
        yield self
        for child in self.children:
            if isinstance(child, Element):
                yield from child.iter_elements()


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = Element(tag="#document")
        self._stack = [self.root]

    def handle_starttag(self, tag, attrs):
        element = Element(tag=tag, attrs={k: (v or "") for k, v in attrs}, parent=self._stack[-1])
        self._stack[-1].children.append(element)
        if tag not in _VOID_TAGS:
            self._stack.append(element)

    def handle_startendtag(self, tag, attrs):
        element = Element(tag=tag, attrs={k: (v or "") for k, v in attrs}, parent=self._stack[-1])
        self._stack[-1].children.append(element)

    def handle_endtag(self, tag):
        # Close the nearest matching open element; tolerate stray end tags.
        for index in range(len(self._stack) - 1, 0, -1):
            if self._stack[index].tag == tag:
                del self._stack[index:]
                return

    def handle_data(self, data):
        if data:
            self._stack[-1].children.append(data)


def parse_html(text: str) -> Element:
    """Parse markup into a synthetic `#document` root element."""
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


@dataclass(frozen=True)
class _Compound:
    tag: Optional[str]
    classes: frozenset[str]
    ident: Optional[str]

    def matches(self, element: Element) -> bool:
        if self.tag is not None and element.tag != self.tag:
            return False
        if self.ident is not None and element.attrs.get("id") != self.ident:
            return False
        return self.classes <= element.classes()


_COMPOUND_RE = re.compile(
    r"^(?P<tag>[a-zA-Z][a-zA-Z0-9-]*)?(?P<rest>(?:[.#][\w-]+)*)$"
)


def _parse_compound(token: str) -> _Compound:
    match = _COMPOUND_RE.match(token)
    if not match or (match.group("tag") is None and not match.group("rest")):
        raise RuleCompileError(f"unsupported selector component {token!r}")
    classes: set[str] = set()
    ident: Optional[str] = None
    rest = match.group("rest")
    for part in re.findall(r"[.#][\w-]+", rest):
        if part.startswith("."):
            classes.add(part[1:])
        else:
            ident = part[1:]
    tag = match.group("tag")
    return _Compound(tag=tag.lower() if tag else None, classes=frozenset(classes), ident=ident)


@dataclass(frozen=True)
class Selector:
    """A compiled selector: alternating compounds and combinators."""

    compounds: tuple[_Compound, ...]
    combinators: tuple[str, ...]  # len == len(compounds) - 1; " " or ">"
    source: str

    def matches(self, element: Element) -> bool:
        return self._matches_upward(element, len(self.compounds) - 1)

    def _matches_upward(self, element: Element, index: int) -> bool:
        if not self.compounds[index].matches(element):
            return False
        if index == 0:
            return True
        combinator = self.combinators[index - 1]
        ancestor = element.parent
        if combinator == ">":
            return ancestor is not None and self._matches_upward(ancestor, index - 1)
        while ancestor is not None:
            if self._matches_upward(ancestor, index - 1):
                return True
            ancestor = ancestor.parent
        return False


def compile_selector(selector: str) -> Selector:
    """Compile a selector string, rejecting unsupported syntax early."""
    text = selector.strip()
    if not text:
        raise RuleCompileError("empty selector")
    for char in ",[]:+~*":
        if char in text:
            raise RuleCompileError(
                f"unsupported selector syntax {char!r} in {selector!r}"
            )
    compounds: list[_Compound] = []
    combinators: list[str] = []
    pending: Optional[str] = None
    for token in re.split(r"(\s*>\s*|\s+)", text):
        if not token:
            continue
        stripped = token.strip()
        if stripped == ">" or (stripped == "" and token):
            if not compounds or pending == ">":
                raise RuleCompileError(f"misplaced combinator in selector {selector!r}")
            pending = ">" if stripped == ">" else (pending or " ")
            continue
        if compounds:
            combinators.append(pending or " ")
        compounds.append(_parse_compound(stripped))
        pending = None
    if pending == ">":
        raise RuleCompileError(f"dangling '>' in selector {selector!r}")
    if not compounds:
        raise RuleCompileError(f"no compounds in selector {selector!r}")
    return Selector(
        compounds=tuple(compounds), combinators=tuple(combinators), source=selector
    )


def select(root: Element, selector: Union[str, Selector]) -> list[Element]:
    """All elements under `root` matching `selector`, in document order."""
    compiled = compile_selector(selector) if isinstance(selector, str) else selector
    return [el for el in root.iter_elements() if el.tag != "#document" and compiled.matches(el)]
