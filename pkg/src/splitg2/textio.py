"""Line-oriented text format for algebras and scenarios.

Two document kinds share one syntax of `key: value` lines with `#`
comments.  An algebra document carries a dimension, an optional
parameter alphabet, and the nonzero structure constants as
`bracket: J K I coefficient` lines.  A scenario document adds the
horizontal/vertical split and optional metric and 3-form data, which is
everything the command-line tools need to run on user-supplied input.

Rendering is byte-stable: fixed key order, sorted indices, canonical
scalar text.  `parse_*(render_*(doc))` reproduces the document.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from . import scalars
from .errors import ParseError
from .exterior import Form, SymTensor2
from .liealg import LieAlgebra

ALGEBRA_FORMAT = "splitg2-algebra 1"
SCENARIO_FORMAT = "splitg2-scenario 1"


@dataclass(frozen=True)
class AlgebraDocument:
    algebra: LieAlgebra
    alphabet: Tuple[str, ...] = ()
    name: str = ""


@dataclass(frozen=True)
class ScenarioDocument:
    """Parsed scenario input.

    `metric` and `phi` are optional: the growth and invariant-space
    commands only need the algebra and the split.
    """

    algebra: LieAlgebra
    horizontal: int
    verticals: Tuple[int, ...]
    alphabet: Tuple[str, ...] = ()
    name: str = ""
    metric: Optional[SymTensor2] = None
    phi: Optional[Form] = None
    exclusions: Tuple[Tuple[str, Fraction], ...] = field(default=())


# -- parsing ----------------------------------------------------------------


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        yield lineno, key.strip(), value.strip()


def _int_fields(lineno: int, value: str, count: int, what: str) -> list:
    parts = value.split(None, count)
    if len(parts) < count:
        raise ParseError(f"line {lineno}: {what} needs {count}+ fields, got {value!r}")
    out = []
    for p in parts[:count]:
        try:
            out.append(int(p))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad integer {p!r}") from exc
    out.append(parts[count] if len(parts) > count else "")
    return out


def _scalar(lineno: int, text: str, alphabet: tuple):
    if not text:
        raise ParseError(f"line {lineno}: missing coefficient")
    try:
        return scalars.parse_scalar(text, alphabet)
    except ParseError as exc:
        raise ParseError(f"line {lineno}: {exc}") from exc


class _Collector:
    """Shared key handling for both document kinds."""

    def __init__(self, kind: str):
        self.kind = kind
        self.name = ""
        self.alphabet: tuple = ()
        self.dim = None
        self.brackets: dict = {}
        self.horizontal = None
        self.verticals = None
        self.metric_entries: dict = {}
        self.phi_terms: dict = {}
        self.exclusions: list = []
        self._seen_scalars = False

    def feed(self, lineno: int, key: str, value: str) -> None:
        handler = getattr(self, "_key_" + key.replace("-", "_"), None)
        if handler is None:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        handler(lineno, value)

    def _once(self, lineno: int, attr: str, new) -> None:
        if getattr(self, attr) is not None:
            raise ParseError(f"line {lineno}: duplicate '{attr}' line")
        setattr(self, attr, new)

    def _key_name(self, lineno: int, value: str) -> None:
        if self.name:
            raise ParseError(f"line {lineno}: duplicate 'name' line")
        self.name = value

    def _key_alphabet(self, lineno: int, value: str) -> None:
        if self.alphabet:
            raise ParseError(f"line {lineno}: duplicate 'alphabet' line")
        if self._seen_scalars:
            raise ParseError(f"line {lineno}: 'alphabet' must precede coefficients")
        names = tuple(value.split())
        if len(set(names)) != len(names):
            raise ParseError(f"line {lineno}: repeated parameter name")
        self.alphabet = names

    def _key_dim(self, lineno: int, value: str) -> None:
        fields = _int_fields(lineno, value, 1, "dim")
        self._once(lineno, "dim", fields[0])

    def _key_horizontal(self, lineno: int, value: str) -> None:
        fields = _int_fields(lineno, value, 1, "horizontal")
        self._once(lineno, "horizontal", fields[0])

    def _key_verticals(self, lineno: int, value: str) -> None:
        try:
            fields = tuple(int(p) for p in value.split())
        except ValueError as exc:
            raise ParseError(f"line {lineno}: verticals must be integers") from exc
        if not fields:
            raise ParseError(f"line {lineno}: empty verticals list")
        self._once(lineno, "verticals", fields)

    def _key_bracket(self, lineno: int, value: str) -> None:
        j, k, i, rest = _int_fields(lineno, value, 3, "bracket")
        coeff = _scalar(lineno, rest, self.alphabet)
        self._seen_scalars = True
        if j >= k:
            raise ParseError(f"line {lineno}: bracket pair must have J < K")
        slot = self.brackets.setdefault((j, k), {})
        if i in slot:
            raise ParseError(f"line {lineno}: duplicate bracket triple {j} {k} {i}")
        slot[i] = coeff

    def _key_metric(self, lineno: int, value: str) -> None:
        i, j, rest = _int_fields(lineno, value, 2, "metric")
        if i > j:
            raise ParseError(f"line {lineno}: metric entry needs i <= j")
        if (i, j) in self.metric_entries:
            raise ParseError(f"line {lineno}: duplicate metric entry {i} {j}")
        try:
            self.metric_entries[(i, j)] = scalars.parse_rational(rest)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: metric entries are plain rationals") from exc

    def _key_phi(self, lineno: int, value: str) -> None:
        i, j, k, rest = _int_fields(lineno, value, 3, "phi")
        if not i < j < k:
            raise ParseError(f"line {lineno}: phi term needs i < j < k")
        if (i, j, k) in self.phi_terms:
            raise ParseError(f"line {lineno}: duplicate phi term {i} {j} {k}")
        self.phi_terms[(i, j, k)] = _scalar(lineno, rest, self.alphabet)
        self._seen_scalars = True

    def _key_exclude(self, lineno: int, value: str) -> None:
        parts = value.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: exclude needs 'parameter value'")
        pname, ptext = parts
        if pname not in self.alphabet:
            raise ParseError(f"line {lineno}: unknown parameter {pname!r}")
        try:
            self.exclusions.append((pname, scalars.parse_rational(ptext)))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: excluded values are plain rationals") from exc

    def algebra(self) -> LieAlgebra:
        if self.dim is None:
            raise ParseError("document has no 'dim' line")
        try:
            return LieAlgebra(self.dim, self.brackets)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def _parse(text: str, expected_format: str) -> _Collector:
    lines = _lines(text)
    try:
        lineno, key, value = next(lines)
    except StopIteration:
        raise ParseError("empty document") from None
    if key != "format":
        raise ParseError(f"line {lineno}: first line must declare 'format'")
    if value != expected_format:
        raise ParseError(
            f"line {lineno}: expected format {expected_format!r}, got {value!r}"
        )
    collector = _Collector(expected_format)
    for lineno, key, value in lines:
        if key == "format":
            raise ParseError(f"line {lineno}: duplicate 'format' line")
        collector.feed(lineno, key, value)
    return collector


def parse_algebra(text: str) -> AlgebraDocument:
    c = _parse(text, ALGEBRA_FORMAT)
    if c.horizontal is not None or c.metric_entries or c.phi_terms:
        raise ParseError("algebra documents carry no scenario data")
    return AlgebraDocument(algebra=c.algebra(), alphabet=c.alphabet, name=c.name)


def parse_scenario(text: str) -> ScenarioDocument:
    c = _parse(text, SCENARIO_FORMAT)
    algebra = c.algebra()
    if c.horizontal is None:
        raise ParseError("scenario document has no 'horizontal' line")
    k = c.horizontal
    if not 1 <= k <= algebra.dim:
        raise ParseError(f"horizontal count {k} outside 1..{algebra.dim}")
    verticals = c.verticals
    if verticals is None:
        verticals = tuple(range(k + 1, algebra.dim + 1))
    for a in verticals:
        if not k < a <= algebra.dim:
            raise ParseError(f"vertical index {a} outside {k + 1}..{algebra.dim}")
    metric = None
    if c.metric_entries:
        try:
            metric = SymTensor2(k, c.metric_entries)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    phi = None
    if c.phi_terms:
        try:
            phi = Form(k, 3, c.phi_terms)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    return ScenarioDocument(
        algebra=algebra,
        horizontal=k,
        verticals=verticals,
        alphabet=c.alphabet,
        name=c.name,
        metric=metric,
        phi=phi,
        exclusions=tuple(c.exclusions),
    )


# -- rendering --------------------------------------------------------------


def _render_common(out: list, name: str, alphabet: tuple, algebra: LieAlgebra) -> None:
    if name:
        out.append(f"name: {name}")
    if alphabet:
        out.append("alphabet: " + " ".join(alphabet))
    out.append(f"dim: {algebra.dim}")
    out.append("# bracket: J K I coefficient  encodes [x_J, x_K] = sum_I coefficient * x_I")
    for (j, k) in sorted(algebra.brackets):
        comps = algebra.brackets[(j, k)]
        for i in sorted(comps):
            out.append(f"bracket: {j} {k} {i} {scalars.render_scalar(comps[i])}")


def render_algebra(doc: AlgebraDocument) -> str:
    out = [f"format: {ALGEBRA_FORMAT}"]
    _render_common(out, doc.name, doc.alphabet, doc.algebra)
    return "\n".join(out) + "\n"


def render_scenario(doc: ScenarioDocument) -> str:
    out = [f"format: {SCENARIO_FORMAT}"]
    _render_common(out, doc.name, doc.alphabet, doc.algebra)
    out.append(f"horizontal: {doc.horizontal}")
    out.append("verticals: " + " ".join(str(a) for a in doc.verticals))
    if doc.metric is not None:
        out.append("# metric: i j value  encodes the symmetric entry g_ij, i <= j")
        for (i, j) in sorted(doc.metric.entries):
            out.append(f"metric: {i} {j} {scalars.render_scalar(doc.metric.entries[(i, j)])}")
    if doc.phi is not None:
        out.append("# phi: i j k coefficient  encodes one increasing 3-form term")
        for key in sorted(doc.phi.terms):
            coeff = scalars.render_scalar(doc.phi.terms[key])
            out.append("phi: " + " ".join(str(i) for i in key) + " " + coeff)
    if doc.exclusions:
        out.append("# exclude: parameter value  marks a rejected specialization value")
        for pname, value in doc.exclusions:
            out.append(f"exclude: {pname} {value}")
    return "\n".join(out) + "\n"
